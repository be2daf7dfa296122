"""Regular Boardgames: front end, move engine, analysis and benchmarks."""

from .analyzer import StraightQuad, StraightValue, strong_straightness, straight_quad, validate
from .automaton import RulesNfa, build_automaton, build_nfa, continuation_membership
from .bench import BenchRecord, montecarlo, perft
from .core import GameState, SemiState, eval_arith, try_apply, undo
from .errors import RbgError
from .frontend import compile_hl_to_ll, compile_source, format_ll
from .lexer import Token, TokenStream, tokenize
from .macros import expand_macros
from .model import KEEPER, AbstractDescription, BoardGraph
from .parser import IndexedRules, index_rules, parse_description, parse_rules
from .reasoner import Game, Move, load_game
from .sugar import desugar

__all__ = [
    "AbstractDescription", "BenchRecord", "BoardGraph", "Game", "GameState", "IndexedRules",
    "KEEPER", "Move", "RbgError", "RulesNfa", "SemiState", "StraightQuad", "StraightValue",
    "Token", "TokenStream", "build_automaton", "build_nfa", "compile_hl_to_ll", "compile_source",
    "continuation_membership", "desugar", "eval_arith", "expand_macros", "format_ll", "index_rules",
    "load_game", "montecarlo", "parse_description", "parse_rules", "perft", "straight_quad",
    "strong_straightness", "tokenize", "try_apply", "undo", "validate",
]
