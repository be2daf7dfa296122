"""Slow reference semantics for differential tests.

Nothing here touches the automaton, the compiled actions or the play-graph
search. Rules are handled as regular-expression terms stepped with Brzozowski
derivatives (normalised for associativity, commutativity and idempotence of
``+`` so the set of derivatives stays finite), and actions are simulated on a
name-based semi-state.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, List, Optional, Tuple

from .analyzer import StraightValue
from .errors import BoundExceeded
from .model import (
    Action, Assignment, Comparison, Concat, Constant, NameRef, Off, On, Pattern,
    Shift, Sum, Switch, is_modifier,
)
from .parser import IndexedRules, index_rules

# ------------------------------------------------------------------ terms

NULL = ("null",)
EPS = ("eps",)


def act(i: int):
    return ("act", i)


def cat(a, b):
    if a == NULL or b == NULL:
        return NULL
    if a == EPS:
        return b
    if b == EPS:
        return a
    if a[0] == "cat":
        return cat(a[1], cat(a[2], b))
    return ("cat", a, b)


def alt(*terms):
    items = set()
    for t in terms:
        if t == NULL:
            continue
        if t[0] == "alt":
            items |= t[1]
        else:
            items.add(t)
    if not items:
        return NULL
    if len(items) == 1:
        return next(iter(items))
    return ("alt", frozenset(items))


def star(t):
    if t in (NULL, EPS):
        return EPS
    if t[0] == "star":
        return t
    return ("star", t)


@lru_cache(maxsize=None)
def nullable(t) -> bool:
    tag = t[0]
    if tag in ("eps", "star"):
        return True
    if tag in ("null", "act"):
        return False
    if tag == "cat":
        return nullable(t[1]) and nullable(t[2])
    return any(nullable(c) for c in t[1])


@lru_cache(maxsize=None)
def derivative(t, i: int):
    tag = t[0]
    if tag in ("null", "eps"):
        return NULL
    if tag == "act":
        return EPS if t[1] == i else NULL
    if tag == "cat":
        left = cat(derivative(t[1], i), t[2])
        return alt(left, derivative(t[2], i)) if nullable(t[1]) else left
    if tag == "alt":
        return alt(*(derivative(c, i) for c in t[1]))
    return cat(derivative(t[1], i), t)


@lru_cache(maxsize=None)
def first(t) -> FrozenSet[int]:
    tag = t[0]
    if tag in ("null", "eps"):
        return frozenset()
    if tag == "act":
        return frozenset([t[1]])
    if tag == "cat":
        return first(t[1]) | first(t[2]) if nullable(t[1]) else first(t[1])
    if tag == "alt":
        return frozenset().union(*(first(c) for c in t[1]))
    return first(t[1])


def to_term(e):
    """Indexed rules expression -> term; a pattern stays one symbol."""
    if isinstance(e, Action):
        return act(e.index)
    if isinstance(e, Concat):
        out = EPS
        for c in reversed(e.children):
            out = cat(to_term(c), out)
        return out
    if isinstance(e, Sum):
        return alt(*(to_term(c) for c in e.children))
    return star(to_term(e.child))


def derive_word(t, word):
    for i in word:
        t = derivative(t, i)
        if t == NULL:
            break
    return t


def accepts(t, word) -> bool:
    return nullable(derive_word(t, word))


def in_prefixes(t, word) -> bool:
    """Membership in pref(L); valid because terms never denote the empty language except NULL."""
    return derive_word(t, word) != NULL


# ------------------------------------------------------------- semantics

INT64 = (-(2 ** 63), 2 ** 63 - 1)


@dataclass(frozen=True)
class OracleSemi:
    player: Optional[str]                  # None is the keeper
    pieces: Tuple[str, ...]                # by vertex position in the board listing
    variables: Tuple[Tuple[str, int], ...]
    position: str


@dataclass(frozen=True)
class OracleState:
    term: tuple
    semi: OracleSemi
    last: int                              # index of the last applied action


class Oracle:
    def __init__(self, desc, depth_bound: int = 64):
        self.desc = desc
        self.depth_bound = depth_bound
        self.indexed: IndexedRules = index_rules(desc.rules)
        self.actions = self.indexed.actions
        self.rules_term = to_term(self.indexed.expr)
        self.pattern_terms = {a.index: to_term(a.spec.body)
                              for a in self.actions[1:] if isinstance(a.spec, Pattern)}
        self.vertices = list(desc.board.vertices)
        self.vpos = {v: n for n, v in enumerate(self.vertices)}
        self.players = list(desc.players)
        self.bounds = dict(desc.all_variables)

    # state helpers

    def initial(self) -> OracleState:
        b = self.desc.board
        semi = OracleSemi(None, tuple(b.initial_pieces),
                          tuple((v, 0) for v in self.bounds), self.vertices[b.start_vertex])
        return OracleState(self.rules_term, semi, 0)

    def key(self, st: OracleState) -> tuple:
        """Encoding comparable with ``GameState.key``."""
        s = st.semi
        player = -1 if s.player is None else self.players.index(s.player)
        pieces = tuple(self.desc.pieces.index(p) for p in s.pieces)
        return (player, pieces, tuple(v for _, v in s.variables), self.vpos[s.position], st.last)

    def _arith(self, e, s: OracleSemi):
        if isinstance(e, Constant):
            return e.value
        if isinstance(e, NameRef):
            vars_ = dict(s.variables)
            if e.name in vars_:
                return vars_[e.name]
            return sum(1 for p in s.pieces if p == e.name)
        a = self._arith(e.left, s)
        b = self._arith(e.right, s)
        if a is None or b is None:
            return None
        if e.op == "+":
            r = a + b
        elif e.op == "-":
            r = a - b
        elif e.op == "*":
            r = a * b
        else:
            if b == 0:
                return None
            r = a // b if a * b >= 0 else -((-a) // b)
        return r if INT64[0] <= r <= INT64[1] else None

    def step(self, i: int, s: OracleSemi, depth: int = 0) -> Optional[OracleSemi]:
        """Semi-state after action ``i``, or None when invalid."""
        spec = self.actions[i].spec
        if isinstance(spec, Shift):
            t = self.desc.board.neighbour(s.position, spec.direction)
            return None if t is None else OracleSemi(s.player, s.pieces, s.variables, t)
        if isinstance(spec, On):
            return s if s.pieces[self.vpos[s.position]] in spec.pieces else None
        if isinstance(spec, Off):
            pieces = list(s.pieces)
            pieces[self.vpos[s.position]] = spec.piece
            return OracleSemi(s.player, tuple(pieces), s.variables, s.position)
        if isinstance(spec, Assignment):
            v = self._arith(spec.value, s)
            if v is None or not 0 <= v <= self.bounds[spec.variable]:
                return None
            variables = tuple((n, v if n == spec.variable else x) for n, x in s.variables)
            return OracleSemi(s.player, s.pieces, variables, s.position)
        if isinstance(spec, Comparison):
            a = self._arith(spec.left, s)
            b = self._arith(spec.right, s)
            if a is None or b is None:
                return None
            ok = {"<": a < b, "<=": a <= b, "==": a == b, "!=": a != b, ">": a > b, ">=": a >= b}[spec.op]
            return s if ok else None
        if isinstance(spec, Switch):
            return OracleSemi(spec.player, s.pieces, s.variables, s.position)
        holds = self._pattern_holds(self.pattern_terms[i], s, depth + 1)
        return s if holds == spec.positive else None

    def _pattern_holds(self, term, s: OracleSemi, depth: int) -> bool:
        seen = set()
        frontier = [(term, s)]
        length = 0
        while frontier:
            nxt = []
            for t, semi in frontier:
                if (t, semi) in seen:
                    continue
                seen.add((t, semi))
                if nullable(t):
                    return True
                for i in sorted(first(t)):
                    if isinstance(self.actions[i].spec, Switch):
                        continue
                    s2 = self.step(i, semi, depth)
                    if s2 is not None:
                        nxt.append((derivative(t, i), s2))
            frontier = nxt
            length += 1
            if frontier and length > self.depth_bound:
                raise BoundExceeded(f"pattern search longer than {self.depth_bound} actions")
        return False

    # moves

    def legal_moves(self, st: OracleState) -> Dict[tuple, OracleState]:
        """Move (tuple of (index, vertex position)) -> state right after its switch."""
        moves: Dict[tuple, OracleState] = {}
        seen = set()
        frontier = [(st.term, st.semi, ())]
        length = 0
        while frontier:
            nxt = []
            for t, semi, mods in frontier:
                if (t, semi, mods) in seen:
                    continue
                seen.add((t, semi, mods))
                for i in sorted(first(t)):
                    s2 = self.step(i, semi)
                    if s2 is None:
                        continue
                    spec = self.actions[i].spec
                    t2 = derivative(t, i)
                    if is_modifier(spec):
                        m2 = mods + ((i, self.vpos[semi.position]),)
                        if isinstance(spec, Switch):
                            moves.setdefault(m2, OracleState(t2, s2, i))
                            continue
                    else:
                        m2 = mods
                    nxt.append((t2, s2, m2))
            frontier = nxt
            length += 1
            if frontier and length > self.depth_bound:
                raise BoundExceeded(f"action sequences longer than {self.depth_bound}")
        return moves

    def completions(self, st: OracleState) -> List[OracleState]:
        """Every keeper completion reachable from ``st`` (one for proper descriptions)."""
        out = {}
        seen = set()
        stack = [st]
        while stack:
            cur = stack.pop()
            if cur in seen:
                continue
            seen.add(cur)
            if cur.semi.player is not None:
                out[self.key(cur)] = cur
                continue
            moves = self.legal_moves(cur)
            if not moves:
                out[self.key(cur)] = cur
            stack.extend(moves.values())
        return list(out.values())

    def root(self) -> OracleState:
        roots = self.completions(self.initial())
        if len(roots) != 1:
            raise ValueError(f"initial state has {len(roots)} keeper completions")
        return roots[0]

    def successors(self, st: OracleState) -> Dict[tuple, OracleState]:
        """Canonical key -> completed successor state, over all legal moves."""
        out = {}
        for after in self.legal_moves(st).values():
            for c in self.completions(after):
                out[self.key(c)] = c
        return out

    def perft(self, st: OracleState, depth: int) -> int:
        if depth == 0:
            return 1
        total = 0
        for after in self.legal_moves(st).values():
            for c in self.completions(after):
                total += self.perft(c, depth - 1)
        return total


def oracle_legal_moves(desc, state: Optional[OracleState] = None, depth_bound: int = 64):
    """Set of moves, each a tuple of (action index, vertex index)."""
    o = Oracle(desc, depth_bound)
    if state is None:
        state = o.root()
    return set(o.legal_moves(state))


# ---------------------------------------------------------- straightness

def oracle_straightness(expr, length_bound: int = 8) -> StraightValue:
    """Largest switch-free modifier run over application-language words up to ``length_bound``.

    A lower bound on the true value; exact once every relevant word fits.
    """
    indexed = expr if isinstance(expr, IndexedRules) else index_rules(expr)
    actions = indexed.actions
    bodies = {a.index: to_term(a.spec.body) for a in actions[1:] if isinstance(a.spec, Pattern)}
    best = 0
    seen = set()

    def walk(t, run, remaining):
        nonlocal best
        key = (t, run, remaining)
        if key in seen:
            return
        seen.add(key)
        best = max(best, run)
        if remaining == 0:
            return
        for i in first(t):
            spec = actions[i].spec
            if isinstance(spec, Switch):
                new_run = 0
            elif is_modifier(spec):
                new_run = run + 1
            else:
                new_run = run
            if isinstance(spec, Pattern):
                # the word may continue inside the pattern body instead
                walk(bodies[i], run, remaining - 1)
            walk(derivative(t, i), new_run, remaining - 1)

    walk(to_term(indexed.expr), 0, length_bound)
    return StraightValue.finite(best)
