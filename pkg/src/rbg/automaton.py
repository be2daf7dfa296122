"""Thompson automata over indexed actions.

Each indexed action a_i labels exactly one transition, whose target q_i is
fresh. The continuation language after reading a_i therefore depends only on
q_i, which is what makes a single rules index enough to resume play.

For the play-graph search the ε-closures are flattened into one table shared
by the rules and all pattern bodies: flat state 0 is the rules' initial state,
flat state i (1..N) is q_i, and N+1+k is the initial state of pattern k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import UnknownIndex
from .model import Action, Concat, Pattern, Star, Sum
from .parser import IndexedRules


@dataclass
class RulesNfa:
    transitions: List[List[Tuple[Optional[int], int]]]   # label None is ε
    initial: int
    final: int
    action_entry: Dict[int, int] = field(default_factory=dict)
    action_source: Dict[int, int] = field(default_factory=dict)
    closure: List[frozenset] = field(default_factory=list)

    @property
    def finals(self) -> frozenset:
        return frozenset([self.final])

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def n_transitions(self) -> int:
        return sum(len(t) for t in self.transitions)

    def next_actions(self, state: int) -> Tuple[int, ...]:
        """Action indices readable from ``state`` after ε-moves, in source order."""
        out = []
        for q in sorted(self.closure[state]):
            for label, _ in self.transitions[q]:
                if label is not None:
                    out.append(label)
        return tuple(sorted(out))

    def accepts_at(self, state: int) -> bool:
        return self.final in self.closure[state]

    def entry_state(self, index: int) -> int:
        if index == 0:
            return self.initial
        if index not in self.action_entry:
            raise UnknownIndex(f"action index {index} does not belong to this automaton")
        return self.action_entry[index]

    def to_dot(self, name: str = "rules") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", f"  start [shape=point]; start -> s{self.initial};",
                 f"  s{self.final} [shape=doublecircle];"]
        for q, edges in enumerate(self.transitions):
            for label, t in edges:
                text = "ε" if label is None else f"a{label}"
                lines.append(f'  s{q} -> s{t} [label="{text}"];')
        lines.append("}")
        return "\n".join(lines)


class _Builder:
    def __init__(self):
        self.transitions: List[List[Tuple[Optional[int], int]]] = []
        self.entry: Dict[int, int] = {}
        self.source: Dict[int, int] = {}

    def state(self) -> int:
        self.transitions.append([])
        return len(self.transitions) - 1

    def build(self, e) -> Tuple[int, int]:
        if isinstance(e, Action):
            s, q = self.state(), self.state()
            self.transitions[s].append((e.index, q))
            self.entry[e.index] = q
            self.source[e.index] = s
            return s, q
        if isinstance(e, Concat):
            start, end = self.build(e.children[0])
            for c in e.children[1:]:
                s, t = self.build(c)
                self.transitions[end].append((None, s))
                end = t
            return start, end
        if isinstance(e, Sum):
            s, t = self.state(), self.state()
            for c in e.children:
                cs, ct = self.build(c)
                self.transitions[s].append((None, cs))
                self.transitions[ct].append((None, t))
            return s, t
        if isinstance(e, Star):
            s, t = self.state(), self.state()
            cs, ct = self.build(e.child)
            self.transitions[s] += [(None, cs), (None, t)]
            self.transitions[ct] += [(None, cs), (None, t)]
            return s, t
        raise TypeError(f"not a rules expression: {e!r}")


def _closures(transitions) -> List[frozenset]:
    out = []
    for q in range(len(transitions)):
        seen = {q}
        stack = [q]
        while stack:
            p = stack.pop()
            for label, t in transitions[p]:
                if label is None and t not in seen:
                    seen.add(t)
                    stack.append(t)
        out.append(frozenset(seen))
    return out


def build_nfa(rules) -> RulesNfa:
    """Thompson NFA for an indexed expression; pattern actions are single symbols."""
    expr = rules.expr if isinstance(rules, IndexedRules) else rules
    b = _Builder()
    start, end = b.build(expr)
    return RulesNfa(b.transitions, start, end, b.entry, b.source, _closures(b.transitions))


def continuation_membership(nfa: RulesNfa, from_index: int, word: Sequence[int]) -> bool:
    """Whether ``word`` is a prefix of some word in the language after ``a_from_index``."""
    current = set(nfa.closure[nfa.entry_state(from_index)])
    for a in word:
        nxt = set()
        for q in current:
            for label, t in nfa.transitions[q]:
                if label == a:
                    nxt |= nfa.closure[t]
        if not nxt:
            return False
        current = nxt
    return bool(current & _coreachable(nfa))


def _coreachable(nfa: RulesNfa) -> frozenset:
    cached = getattr(nfa, "_coreach", None)
    if cached is not None:
        return cached
    reverse: List[List[int]] = [[] for _ in nfa.transitions]
    for q, edges in enumerate(nfa.transitions):
        for _, t in edges:
            reverse[t].append(q)
    seen = {nfa.final}
    stack = [nfa.final]
    while stack:
        for p in reverse[stack.pop()]:
            if p not in seen:
                seen.add(p)
                stack.append(p)
    nfa._coreach = frozenset(seen)
    return nfa._coreach


@dataclass
class Automaton:
    """The rules NFA, one NFA per pattern body, and the flattened search table."""

    rules: RulesNfa
    patterns: List[RulesNfa]        # by pattern number
    pattern_actions: List[int]      # pattern number -> index of its pattern action
    succ: List[Tuple[int, ...]]     # flat state -> readable action indices
    accept: List[bool]
    pattern_start: List[int]        # pattern number -> flat state

    @property
    def n_flat(self) -> int:
        return len(self.succ)

    def nfa_of(self, index: int) -> RulesNfa:
        """The NFA whose alphabet contains action ``index``."""
        if index in self.rules.action_entry or index == 0:
            return self.rules
        for nfa in self.patterns:
            if index in nfa.action_entry:
                return nfa
        raise UnknownIndex(f"unknown action index {index}")

    def to_dot(self) -> str:
        parts = [self.rules.to_dot("rules")]
        for k, nfa in enumerate(self.patterns):
            parts.append(nfa.to_dot(f"pattern{k}_a{self.pattern_actions[k]}"))
        return "\n".join(parts)


def build_automaton(indexed: IndexedRules, pattern_actions: Optional[List[int]] = None) -> Automaton:
    n = indexed.size
    if pattern_actions is None:
        pattern_actions = [a.index for a in indexed.actions[1:] if isinstance(a.spec, Pattern)]
    main = build_nfa(indexed.expr)
    pats = [build_nfa(indexed.actions[i].spec.body) for i in pattern_actions]
    succ: List[Tuple[int, ...]] = [()] * (n + 1 + len(pats))
    accept = [False] * len(succ)
    for nfa, start_flat in [(main, 0)] + [(p, n + 1 + k) for k, p in enumerate(pats)]:
        succ[start_flat] = nfa.next_actions(nfa.initial)
        accept[start_flat] = nfa.accepts_at(nfa.initial)
        for i, q in nfa.action_entry.items():
            succ[i] = nfa.next_actions(q)
            accept[i] = nfa.accepts_at(q)
    return Automaton(main, pats, list(pattern_actions), succ, accept,
                     [n + 1 + k for k in range(len(pats))])
