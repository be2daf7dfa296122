"""Abstract syntax of descriptions: rules expressions, actions, boards."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple, Union

from .errors import Span

KEEPER = -1  # player index of the formal keeper (distinct from a player named "keeper")


# ---------------------------------------------------------------- arithmetic

@dataclass(frozen=True)
class Constant:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class NameRef:
    """A variable or a piece; which one is decided when the description is bound."""

    name: str
    span: Optional[Span] = field(default=None, compare=False)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "ArithExpr"
    right: "ArithExpr"

    def __str__(self):
        return f"({self.left}{self.op}{self.right})"


ArithExpr = Union[Constant, NameRef, BinOp]

RELATIONS = {"<": "<", "<=": "<=", "==": "==", "!=": "!=", ">": ">", ">=": ">="}


# ------------------------------------------------------------------- actions

@dataclass(frozen=True)
class Shift:
    direction: str

    def __str__(self):
        return self.direction


@dataclass(frozen=True)
class On:
    pieces: Tuple[str, ...]

    def __str__(self):
        return "{" + ",".join(self.pieces) + "}"


@dataclass(frozen=True)
class Off:
    piece: str

    def __str__(self):
        return f"[{self.piece}]"


@dataclass(frozen=True)
class Assignment:
    variable: str
    value: ArithExpr

    def __str__(self):
        return f"[${self.variable}={_arith_text(self.value)}]"


@dataclass(frozen=True)
class Comparison:
    left: ArithExpr
    op: str
    right: ArithExpr

    def __str__(self):
        return f"{{${_arith_text(self.left)}{self.op}{_arith_text(self.right)}}}"


@dataclass(frozen=True)
class Switch:
    player: Optional[str]  # None is the keeper (->>)

    def __str__(self):
        return "->>" if self.player is None else f"->{self.player}"


@dataclass(frozen=True)
class Pattern:
    positive: bool
    body: "RulesExpr"

    def __str__(self):
        return ("{?" if self.positive else "{!") + format_rules(self.body) + "}"


ActionSpec = Union[Shift, On, Off, Assignment, Comparison, Switch, Pattern]
MODIFIERS = (Off, Assignment, Switch)


def is_modifier(spec) -> bool:
    return isinstance(spec, MODIFIERS)


def _arith_text(e) -> str:
    text = str(e)
    return text[1:-1] if isinstance(e, BinOp) else text


# --------------------------------------------------------------------- rules

@dataclass(frozen=True)
class Action:
    spec: ActionSpec
    index: int = 0
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Concat:
    children: Tuple["RulesExpr", ...]


@dataclass(frozen=True)
class Sum:
    children: Tuple["RulesExpr", ...]


@dataclass(frozen=True)
class Star:
    child: "RulesExpr"


RulesExpr = Union[Action, Concat, Sum, Star]


def format_rules(e: RulesExpr) -> str:
    """Compact text form; parenthesises only where precedence requires it."""
    if isinstance(e, Action):
        return str(e.spec)
    if isinstance(e, Star):
        inner = format_rules(e.child)
        if not isinstance(e.child, Action):
            inner = f"({inner})"
        return inner + "*"
    if isinstance(e, Concat):
        parts = []
        for c in e.children:
            t = format_rules(c)
            parts.append(f"({t})" if isinstance(c, Sum) else t)
        return " ".join(parts)
    return "+".join(format_rules(c) for c in e.children)


def iter_actions(e: RulesExpr, into_patterns: bool = True):
    """Yield Action leaves in left-to-right source order (pattern bodies inline)."""
    if isinstance(e, Action):
        yield e
        if into_patterns and isinstance(e.spec, Pattern):
            yield from iter_actions(e.spec.body)
    elif isinstance(e, Star):
        yield from iter_actions(e.child, into_patterns)
    else:
        for c in e.children:
            yield from iter_actions(c, into_patterns)


def count_nodes(e: RulesExpr) -> int:
    if isinstance(e, Action):
        return 1 + (count_nodes(e.spec.body) if isinstance(e.spec, Pattern) else 0)
    if isinstance(e, Star):
        return 1 + count_nodes(e.child)
    return 1 + sum(count_nodes(c) for c in e.children)


# --------------------------------------------------------------------- board

@dataclass
class BoardGraph:
    vertices: list            # vertex names, dense-indexed
    directions: list          # labels, dense-indexed
    delta: list               # delta[v][d] -> vertex index or -1
    initial_pieces: list      # piece name per vertex
    start_vertex: int = 0

    def __post_init__(self):
        self.vertex_index = {v: i for i, v in enumerate(self.vertices)}
        self.direction_index = {d: i for i, d in enumerate(self.directions)}

    def edges(self):
        """(from, label, to) triples in vertex then label order."""
        for v, row in enumerate(self.delta):
            for d, t in enumerate(row):
                if t >= 0:
                    yield self.vertices[v], self.directions[d], self.vertices[t]

    def neighbour(self, vertex: str, label: str) -> Optional[str]:
        d = self.direction_index.get(label)
        if d is None:
            return None
        t = self.delta[self.vertex_index[vertex]][d]
        return None if t < 0 else self.vertices[t]


@dataclass
class AbstractDescription:
    players: Dict[str, int]      # name -> score bound, in declaration order
    pieces: Tuple[str, ...]
    variables: Dict[str, int]    # non-player variables -> bound
    board: BoardGraph
    rules: RulesExpr
    spans: dict = field(default_factory=dict, repr=False)

    @property
    def all_variables(self) -> Dict[str, int]:
        """Players' score variables first, then the declared variables."""
        out = dict(self.players)
        out.update(self.variables)
        return out
