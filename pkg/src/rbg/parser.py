"""Parser for low-level descriptions.

``parse_description`` turns an LL token stream into a validated
:class:`~rbg.model.AbstractDescription`. ``parse_rules`` parses a standalone
rules expression without resolving names, which is what the analyzer tests and
the oracle use for small fragments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import (
    DisjointnessViolation, DuplicateEdgeLabel, DuplicateSection, MissingSection,
    RbgSyntaxError, UndeclaredIdentifier,
)
from .lexer import Kind, SECTION_KEYWORDS, Token, tokenize
from .model import (
    AbstractDescription, Action, Assignment, BinOp, BoardGraph, Comparison, Concat,
    Constant, NameRef, Off, On, Pattern, RulesExpr, Shift, Star, Sum, Switch,
    iter_actions,
)

INT64_MAX = 2**63 - 1

_RELATION_KINDS = {Kind.LT, Kind.LE, Kind.EQ, Kind.NE, Kind.GT, Kind.GE}


class _Cursor:
    def __init__(self, tokens, what="description"):
        self.tokens = list(tokens)
        self.pos = 0
        self.what = what

    def peek(self, offset=0) -> Optional[Token]:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def at(self, *kinds) -> bool:
        t = self.peek()
        return t is not None and t.kind in kinds

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            self.fail("unexpected end of input")
        self.pos += 1
        return t

    def expect(self, *kinds) -> Token:
        t = self.peek()
        if t is None or t.kind not in kinds:
            self.fail(
                "unexpected end of input" if t is None else f"unexpected token {t.text!r}",
                expected=[k.value for k in kinds],
            )
        self.pos += 1
        return t

    def done(self) -> bool:
        return self.pos >= len(self.tokens)

    def fail(self, message, expected=()):
        t = self.peek()
        if t is None and self.tokens:
            t = self.tokens[-1]
        raise RbgSyntaxError(message, t.span if t else None, expected)


# ------------------------------------------------------------------- rules

def _parse_sum(cur: _Cursor) -> RulesExpr:
    children = [_parse_concat(cur)]
    while cur.at(Kind.PLUS):
        cur.next()
        children.append(_parse_concat(cur))
    return children[0] if len(children) == 1 else Sum(tuple(children))


_ACTION_START = {
    Kind.IDENT, Kind.LBRACE, Kind.LBRACE_QUESTION, Kind.LBRACE_BANG,
    Kind.LBRACE_DOLLAR, Kind.LBRACKET, Kind.LBRACKET_DOLLAR, Kind.ARROW,
    Kind.KEEPER_ARROW, Kind.LPAREN,
}


def _parse_concat(cur: _Cursor) -> RulesExpr:
    children = [_parse_element(cur)]
    while cur.at(*_ACTION_START):
        children.append(_parse_element(cur))
    return children[0] if len(children) == 1 else Concat(tuple(children))


def _parse_element(cur: _Cursor) -> RulesExpr:
    if cur.at(Kind.LPAREN):
        cur.next()
        e = _parse_sum(cur)
        cur.expect(Kind.RPAREN)
    else:
        e = _parse_action(cur)
    if cur.at(Kind.STAR):
        cur.next()
        e = Star(e)
        if cur.at(Kind.STAR):
            cur.fail("an element takes at most one '*'")
    return e


def _parse_action(cur: _Cursor) -> Action:
    t = cur.peek()
    if t is None:
        cur.fail("expected an action")
    k = t.kind
    if k is Kind.IDENT:
        cur.next()
        return Action(Shift(t.text), span=t.span)
    if k is Kind.LBRACE:
        cur.next()
        names = []
        if not cur.at(Kind.RBRACE):
            names.append(cur.expect(Kind.IDENT).text)
            while cur.at(Kind.COMMA):
                cur.next()
                names.append(cur.expect(Kind.IDENT).text)
        cur.expect(Kind.RBRACE)
        return Action(On(tuple(names)), span=t.span)
    if k in (Kind.LBRACE_QUESTION, Kind.LBRACE_BANG):
        cur.next()
        body = _parse_sum(cur)
        cur.expect(Kind.RBRACE)
        return Action(Pattern(k is Kind.LBRACE_QUESTION, body), span=t.span)
    if k is Kind.LBRACE_DOLLAR:
        cur.next()
        left = _parse_arith(cur)
        op = cur.expect(*_RELATION_KINDS).text
        right = _parse_arith(cur)
        cur.expect(Kind.RBRACE)
        return Action(Comparison(left, op, right), span=t.span)
    if k is Kind.LBRACKET:
        cur.next()
        piece = cur.expect(Kind.IDENT).text
        cur.expect(Kind.RBRACKET)
        return Action(Off(piece), span=t.span)
    if k is Kind.LBRACKET_DOLLAR:
        cur.next()
        var = cur.expect(Kind.IDENT).text
        cur.expect(Kind.ASSIGN)
        value = _parse_arith(cur)
        cur.expect(Kind.RBRACKET)
        return Action(Assignment(var, value), span=t.span)
    if k is Kind.ARROW:
        cur.next()
        return Action(Switch(cur.expect(Kind.IDENT).text), span=t.span)
    if k is Kind.KEEPER_ARROW:
        cur.next()
        return Action(Switch(None), span=t.span)
    cur.fail(f"unexpected token {t.text!r}", expected=["action", "("])


def _parse_arith(cur: _Cursor):
    e = _parse_term(cur)
    while cur.at(Kind.PLUS, Kind.MINUS):
        op = cur.next().text
        e = BinOp(op, e, _parse_term(cur))
    return e


def _parse_term(cur: _Cursor):
    e = _parse_factor(cur)
    while cur.at(Kind.STAR, Kind.SLASH):
        op = cur.next().text
        e = BinOp(op, e, _parse_factor(cur))
    return e


def _parse_factor(cur: _Cursor):
    t = cur.expect(Kind.LPAREN, Kind.NAT, Kind.IDENT)
    if t.kind is Kind.LPAREN:
        e = _parse_arith(cur)
        cur.expect(Kind.RPAREN)
        return e
    if t.kind is Kind.NAT:
        return Constant(int(t.text))
    return NameRef(t.text, t.span)


def parse_rules(source) -> RulesExpr:
    """Parse a bare rules expression (text or tokens) without name checks."""
    tokens = tokenize(source) if isinstance(source, str) else source
    cur = _Cursor(tokens, "rules")
    e = _parse_sum(cur)
    if not cur.done():
        cur.fail(f"unexpected token {cur.peek().text!r}")
    return e


# ---------------------------------------------------------------- sections

def split_sections(tokens) -> List[Tuple[Token, List[Token]]]:
    """Split at ``#``; returns (name token, body tokens after '=') pairs."""
    cur = _Cursor(tokens)
    out = []
    while not cur.done():
        cur.expect(Kind.HASH)
        name = cur.next()
        if name.kind not in SECTION_KEYWORDS:
            raise RbgSyntaxError(
                f"unknown section {name.text!r} (macros are only allowed in high-level input)",
                name.span, [k.value for k in SECTION_KEYWORDS],
            )
        cur.expect(Kind.ASSIGN)
        start = cur.pos
        while not cur.done() and not cur.at(Kind.HASH):
            cur.next()
        out.append((name, cur.tokens[start:cur.pos]))
    return out


def _parse_bounded(cur: _Cursor, allow_empty: bool):
    out: Dict[str, int] = {}
    spans = {}
    if cur.done():
        if allow_empty:
            return out, spans
        cur.fail("expected a declaration")
    while True:
        name = cur.expect(Kind.IDENT)
        cur.expect(Kind.LPAREN)
        bound_tok = cur.expect(Kind.NAT)
        cur.expect(Kind.RPAREN)
        bound = int(bound_tok.text)
        if bound > INT64_MAX:
            raise RbgSyntaxError(f"bound of {name.text!r} does not fit in 64 bits", bound_tok.span)
        if name.text in out:
            raise DisjointnessViolation(f"{name.text!r} declared twice", name.span)
        out[name.text] = bound
        spans[name.text] = name.span
        if cur.done():
            return out, spans
        cur.expect(Kind.COMMA)


def _parse_pieces(cur: _Cursor):
    names, spans = [], {}
    while True:
        t = cur.expect(Kind.IDENT)
        if t.text in spans:
            raise DisjointnessViolation(f"piece {t.text!r} declared twice", t.span)
        names.append(t.text)
        spans[t.text] = t.span
        if cur.done():
            return tuple(names), spans
        cur.expect(Kind.COMMA)


def _parse_board(cur: _Cursor):
    nodes = []  # (name_tok, piece_tok, [(label_tok, target_tok)])
    if cur.done():
        cur.fail("board needs at least one vertex")
    while not cur.done():
        name = cur.expect(Kind.IDENT)
        cur.expect(Kind.LBRACKET)
        piece = cur.expect(Kind.IDENT)
        cur.expect(Kind.RBRACKET)
        cur.expect(Kind.LBRACE)
        edges = []
        if not cur.at(Kind.RBRACE):
            while True:
                label = cur.expect(Kind.IDENT)
                cur.expect(Kind.COLON)
                target = cur.expect(Kind.IDENT)
                edges.append((label, target))
                if not cur.at(Kind.COMMA):
                    break
                cur.next()
        cur.expect(Kind.RBRACE)
        nodes.append((name, piece, edges))

    vertex_index = {}
    for name, _, _ in nodes:
        if name.text in vertex_index:
            raise RbgSyntaxError(f"vertex {name.text!r} defined twice", name.span)
        vertex_index[name.text] = len(vertex_index)
    directions: Dict[str, int] = {}
    label_spans = {}
    for _, _, edges in nodes:
        for label, _ in edges:
            if label.text not in directions:
                directions[label.text] = len(directions)
                label_spans[label.text] = label.span
    delta = [[-1] * len(directions) for _ in nodes]
    for v, (name, _, edges) in enumerate(nodes):
        for label, target in edges:
            d = directions[label.text]
            if delta[v][d] >= 0:
                raise DuplicateEdgeLabel(
                    f"vertex {name.text!r} has two edges labelled {label.text!r}", label.span)
            if target.text not in vertex_index:
                raise UndeclaredIdentifier(f"unknown vertex {target.text!r}", target.span)
            delta[v][d] = vertex_index[target.text]
    board = BoardGraph(
        vertices=[n.text for n, _, _ in nodes],
        directions=list(directions),
        delta=delta,
        initial_pieces=[p.text for _, p, _ in nodes],
        start_vertex=0,
    )
    piece_spans = [p.span for _, p, _ in nodes]
    return board, label_spans, piece_spans


def parse_description(stream) -> AbstractDescription:
    """Parse and validate an LL description (text or token stream)."""
    tokens = tokenize(stream) if isinstance(stream, str) else stream
    found: Dict[Kind, Tuple[Token, list]] = {}
    for name, body in split_sections(tokens):
        if name.kind in found:
            raise DuplicateSection(f"section #{name.text} defined twice", name.span)
        found[name.kind] = (name, body)
    for kind in (Kind.PLAYERS, Kind.PIECES, Kind.VARIABLES, Kind.BOARD, Kind.RULES):
        if kind not in found:
            raise MissingSection(f"missing section #{kind.value}")

    players, player_spans = _parse_bounded(_Cursor(found[Kind.PLAYERS][1]), allow_empty=False)
    variables, var_spans = _parse_bounded(_Cursor(found[Kind.VARIABLES][1]), allow_empty=True)
    pieces, piece_spans = _parse_pieces(_Cursor(found[Kind.PIECES][1]))
    board, label_spans, board_piece_spans = _parse_board(_Cursor(found[Kind.BOARD][1]))
    cur = _Cursor(found[Kind.RULES][1], "rules")
    if cur.done():
        cur.fail("empty rules")
    rules = _parse_sum(cur)
    if not cur.done():
        cur.fail(f"unexpected token {cur.peek().text!r}")

    groups = [
        ("player", player_spans), ("piece", piece_spans),
        ("variable", var_spans), ("direction", label_spans),
    ]
    seen: Dict[str, str] = {}
    for what, spans in groups:
        for name, span in spans.items():
            if name in seen:
                raise DisjointnessViolation(
                    f"{name!r} declared both as {seen[name]} and as {what}", span)
            seen[name] = what

    piece_set = set(pieces)
    for piece, span in zip(board.initial_pieces, board_piece_spans):
        if piece not in piece_set:
            raise UndeclaredIdentifier(f"undeclared piece {piece!r} on the board", span)

    desc = AbstractDescription(
        players=players, pieces=pieces, variables=variables, board=board, rules=rules,
        spans={"players": player_spans, "variables": var_spans, "pieces": piece_spans},
    )
    check_names(desc)
    return desc


def check_names(desc: AbstractDescription) -> None:
    """Resolve every identifier used in the rules against the declarations."""
    pieces = set(desc.pieces)
    variables = set(desc.all_variables)
    dirs = set(desc.board.directions)

    def arith(e, span):
        if isinstance(e, NameRef):
            if e.name not in variables and e.name not in pieces:
                raise UndeclaredIdentifier(f"unknown variable or piece {e.name!r}", e.span or span)
        elif isinstance(e, BinOp):
            arith(e.left, span)
            arith(e.right, span)

    for a in iter_actions(desc.rules):
        s = a.spec
        if isinstance(s, Shift) and s.direction not in dirs:
            raise UndeclaredIdentifier(f"unknown direction {s.direction!r}", a.span)
        elif isinstance(s, On):
            for p in s.pieces:
                if p not in pieces:
                    raise UndeclaredIdentifier(f"unknown piece {p!r}", a.span)
        elif isinstance(s, Off) and s.piece not in pieces:
            raise UndeclaredIdentifier(f"unknown piece {s.piece!r}", a.span)
        elif isinstance(s, Assignment):
            if s.variable not in variables:
                raise UndeclaredIdentifier(f"unknown variable {s.variable!r}", a.span)
            arith(s.value, a.span)
        elif isinstance(s, Comparison):
            arith(s.left, a.span)
            arith(s.right, a.span)
        elif isinstance(s, Switch) and s.player is not None and s.player not in desc.players:
            raise UndeclaredIdentifier(f"unknown player {s.player!r}", a.span)


# ---------------------------------------------------------------- indexing

@dataclass(frozen=True)
class IndexedRules:
    """Rules with every action occurrence numbered from 1.

    ``actions[i]`` is the Action leaf with index ``i``; ``actions[0]`` is None and
    stands for the position before any action.
    """

    expr: RulesExpr
    actions: Tuple[Optional[Action], ...]

    @property
    def size(self) -> int:
        return len(self.actions) - 1


def index_rules(rules: RulesExpr) -> IndexedRules:
    table: List[Optional[Action]] = [None]

    def walk(e):
        if isinstance(e, Action):
            i = len(table)
            table.append(None)
            spec = e.spec
            if isinstance(spec, Pattern):
                spec = Pattern(spec.positive, walk(spec.body))
            out = Action(spec, i, e.span)
            table[i] = out
            return out
        if isinstance(e, Star):
            return Star(walk(e.child))
        return type(e)(tuple(walk(c) for c in e.children))

    expr = walk(rules)
    return IndexedRules(expr, tuple(table))
