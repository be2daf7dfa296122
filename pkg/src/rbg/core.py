"""Game states and the semantics of single actions.

A :class:`GameState` is mutable and owned by one caller. Every application
returns an :class:`UndoRecord` holding old values, so ``undo`` restores the
exact previous state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from .model import (
    KEEPER, AbstractDescription, Assignment, Comparison, Constant, NameRef,
    Off, On, Pattern, Shift, Switch,
)
from .parser import IndexedRules

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1


class _Sentinel:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


DIVZERO = _Sentinel("DIVZERO")
OVERFLOW = _Sentinel("OVERFLOW")

SHIFT, ON, OFF, ASSIGN, COMPARE, SWITCH, PATTERN = range(7)
KIND_NAMES = ("shift", "on", "off", "assign", "compare", "switch", "pattern")


# -------------------------------------------------------------------- state

@dataclass
class SemiState:
    player: int                 # index into players, or KEEPER
    pieces: List[int]           # piece index per vertex
    counts: List[int]           # number of vertices holding each piece
    variables: List[int]        # players' scores first, then other variables
    position: int

    def copy(self) -> "SemiState":
        return SemiState(self.player, list(self.pieces), list(self.counts),
                         list(self.variables), self.position)


@dataclass
class GameState:
    semi: SemiState
    rules_index: int = 0

    def copy(self) -> "GameState":
        return GameState(self.semi.copy(), self.rules_index)

    def key(self) -> tuple:
        """Hashable canonical encoding."""
        s = self.semi
        return (s.player, tuple(s.pieces), tuple(s.variables), s.position, self.rules_index)


@dataclass(frozen=True)
class UndoRecord:
    kind: int
    slot: int          # vertex, variable or -1
    old: int           # previous piece / value / player
    position: int
    rules_index: int


class Binding:
    """Name resolution from a description to dense indices."""

    def __init__(self, desc: AbstractDescription):
        self.desc = desc
        self.players = list(desc.players)
        self.player_index = {p: i for i, p in enumerate(self.players)}
        self.pieces = list(desc.pieces)
        self.piece_index = {p: i for i, p in enumerate(self.pieces)}
        all_vars = desc.all_variables
        self.variables = list(all_vars)
        self.variable_index = {v: i for i, v in enumerate(self.variables)}
        self.bounds = [all_vars[v] for v in self.variables]
        self.board = desc.board

    def initial_state(self) -> GameState:
        board = self.board
        pieces = [self.piece_index[p] for p in board.initial_pieces]
        counts = [0] * len(self.pieces)
        for p in pieces:
            counts[p] += 1
        semi = SemiState(KEEPER, pieces, counts, [0] * len(self.variables), board.start_vertex)
        return GameState(semi, 0)

    def player_name(self, player: int) -> str:
        return "<keeper>" if player == KEEPER else self.players[player]


# --------------------------------------------------------------- arithmetic

def _div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def eval_arith(expr, semi: SemiState, binding: Binding):
    """Reference interpreter: an int, DIVZERO, or OVERFLOW."""
    if isinstance(expr, Constant):
        return expr.value
    if isinstance(expr, NameRef):
        if expr.name in binding.variable_index:
            return semi.variables[binding.variable_index[expr.name]]
        return semi.counts[binding.piece_index[expr.name]]
    left = eval_arith(expr.left, semi, binding)
    if not isinstance(left, int):
        return left
    right = eval_arith(expr.right, semi, binding)
    if not isinstance(right, int):
        return right
    if expr.op == "+":
        r = left + right
    elif expr.op == "-":
        r = left - right
    elif expr.op == "*":
        r = left * right
    else:
        if right == 0:
            return DIVZERO
        r = _div(left, right)
    if r < INT64_MIN or r > INT64_MAX:
        return OVERFLOW
    return r


def compile_arith(expr, binding: Binding) -> Callable[[SemiState], Optional[int]]:
    """Closure form of ``eval_arith``; returns None where the interpreter gives a sentinel."""
    if isinstance(expr, Constant):
        value = expr.value
        return lambda s: value
    if isinstance(expr, NameRef):
        if expr.name in binding.variable_index:
            k = binding.variable_index[expr.name]
            return lambda s: s.variables[k]
        k = binding.piece_index[expr.name]
        return lambda s: s.counts[k]
    left = compile_arith(expr.left, binding)
    right = compile_arith(expr.right, binding)
    op = expr.op

    def run(s):
        a = left(s)
        if a is None:
            return None
        b = right(s)
        if b is None:
            return None
        if op == "+":
            r = a + b
        elif op == "-":
            r = a - b
        elif op == "*":
            r = a * b
        elif b == 0:
            return None
        else:
            r = _div(a, b)
        if r < INT64_MIN or r > INT64_MAX:
            return None
        return r

    return run


_RELATIONS = {
    "<": lambda a, b: a < b, "<=": lambda a, b: a <= b, "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b, ">": lambda a, b: a > b, ">=": lambda a, b: a >= b,
}


# ------------------------------------------------------------------ actions

class CompiledAction:
    """An indexed action bound to dense indices; ``arg`` depends on ``kind``.

    shift: list mapping vertex -> target or -1; on: frozenset of piece indices;
    off: piece index; assign: (variable, value closure, bound);
    compare: (left closure, relation, right closure); switch: player or KEEPER;
    pattern: (positive, pattern number).
    """

    __slots__ = ("index", "kind", "arg", "spec")

    def __init__(self, index, kind, arg, spec):
        self.index = index
        self.kind = kind
        self.arg = arg
        self.spec = spec

    @property
    def is_modifier(self) -> bool:
        return self.kind in (OFF, ASSIGN, SWITCH)

    def __repr__(self):
        return f"CompiledAction({self.index}, {KIND_NAMES[self.kind]}, {self.spec})"


def compile_actions(indexed: IndexedRules, binding: Binding) -> Tuple[List[Optional[CompiledAction]], List[int]]:
    """Compile every indexed action. Returns (actions, pattern action indices)."""
    board = binding.board
    out: List[Optional[CompiledAction]] = [None]
    patterns: List[int] = []
    for a in indexed.actions[1:]:
        s = a.spec
        if isinstance(s, Shift):
            d = board.direction_index.get(s.direction)
            targets = [row[d] for row in board.delta] if d is not None else [-1] * len(board.vertices)
            out.append(CompiledAction(a.index, SHIFT, targets, s))
        elif isinstance(s, On):
            out.append(CompiledAction(a.index, ON, frozenset(binding.piece_index[p] for p in s.pieces), s))
        elif isinstance(s, Off):
            out.append(CompiledAction(a.index, OFF, binding.piece_index[s.piece], s))
        elif isinstance(s, Assignment):
            k = binding.variable_index[s.variable]
            out.append(CompiledAction(a.index, ASSIGN, (k, compile_arith(s.value, binding), binding.bounds[k]), s))
        elif isinstance(s, Comparison):
            arg = (compile_arith(s.left, binding), _RELATIONS[s.op], compile_arith(s.right, binding))
            out.append(CompiledAction(a.index, COMPARE, arg, s))
        elif isinstance(s, Switch):
            player = KEEPER if s.player is None else binding.player_index[s.player]
            out.append(CompiledAction(a.index, SWITCH, player, s))
        elif isinstance(s, Pattern):
            out.append(CompiledAction(a.index, PATTERN, (s.positive, len(patterns)), s))
            patterns.append(a.index)
        else:  # pragma: no cover
            raise TypeError(f"unknown action {s!r}")
    return out, patterns


def try_apply(action: CompiledAction, state: GameState, at_index: Optional[int] = None,
              pattern_eval: Optional[Callable[[CompiledAction, GameState], bool]] = None):
    """Apply one action if valid. Returns (valid, UndoRecord or None)."""
    semi = state.semi
    kind = action.kind
    pos = semi.position
    index = action.index if at_index is None else at_index
    rec = None
    if kind == SHIFT:
        t = action.arg[pos]
        if t < 0:
            return False, None
        rec = UndoRecord(SHIFT, -1, -1, pos, state.rules_index)
        semi.position = t
    elif kind == ON:
        if semi.pieces[pos] not in action.arg:
            return False, None
        rec = UndoRecord(ON, -1, -1, pos, state.rules_index)
    elif kind == OFF:
        old = semi.pieces[pos]
        rec = UndoRecord(OFF, pos, old, pos, state.rules_index)
        semi.counts[old] -= 1
        semi.counts[action.arg] += 1
        semi.pieces[pos] = action.arg
    elif kind == ASSIGN:
        k, value, bound = action.arg
        v = value(semi)
        if v is None or v < 0 or v > bound:
            return False, None
        rec = UndoRecord(ASSIGN, k, semi.variables[k], pos, state.rules_index)
        semi.variables[k] = v
    elif kind == COMPARE:
        left, rel, right = action.arg
        a = left(semi)
        b = right(semi)
        if a is None or b is None or not rel(a, b):
            return False, None
        rec = UndoRecord(COMPARE, -1, -1, pos, state.rules_index)
    elif kind == SWITCH:
        rec = UndoRecord(SWITCH, -1, semi.player, pos, state.rules_index)
        semi.player = action.arg
    elif kind == PATTERN:
        if pattern_eval is None:
            raise ValueError("pattern actions need a pattern evaluator")
        if not pattern_eval(action, state):
            return False, None
        rec = UndoRecord(PATTERN, -1, -1, pos, state.rules_index)
    state.rules_index = index
    return True, rec


def undo(state: GameState, rec: UndoRecord) -> GameState:
    semi = state.semi
    if rec.kind == OFF:
        cur = semi.pieces[rec.slot]
        semi.counts[cur] -= 1
        semi.counts[rec.old] += 1
        semi.pieces[rec.slot] = rec.old
    elif rec.kind == ASSIGN:
        semi.variables[rec.slot] = rec.old
    elif rec.kind == SWITCH:
        semi.player = rec.old
    semi.position = rec.position
    state.rules_index = rec.rules_index
    return state
