"""Move generation by depth-first search over the play graph.

Vertices of the play graph are (automaton state, board vertex) pairs together
with the modifier applications made so far. Within one modifier prefix the
semi-state only differs in the position, so that part of the search is a plain
graph traversal with a visited set. Applying a modifier starts a new prefix
with a fresh visited set; reaching a switch reports the prefix as a move.
"""

from __future__ import annotations

import itertools
import os
from typing import Dict, List, Optional, Sequence, Tuple

from .automaton import Automaton, build_automaton
from .core import (
    COMPARE, OFF, ON, PATTERN, SHIFT, SWITCH, Binding, GameState, compile_actions,
    try_apply, undo,
)
from .errors import IllegalMove, KeeperNondeterminism, ReasonerError, StraightnessCapExceeded
from .model import KEEPER, AbstractDescription
from .parser import index_rules

DEFAULT_CAP = 1024
KEEPER_STEP_LIMIT = 100_000


class Move(tuple):
    """A tuple of (action index, vertex) pairs; the last one is a switch."""

    @property
    def applications(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(self)

    @property
    def switch_index(self) -> int:
        return self[-1][0]


class _Stop(Exception):
    pass


def resolve_cap(cap: Optional[int], strong: Optional[object] = None) -> int:
    """Explicit value, then RBG_CAP, then finite strong straightness, then the default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get("RBG_CAP")
    if env:
        return int(env)
    if strong is not None and getattr(strong, "is_finite", False):
        return int(strong.value)
    return DEFAULT_CAP


class Game:
    """Everything needed to play one description: bindings, actions, automata."""

    def __init__(self, desc: AbstractDescription, cap: Optional[int] = None):
        from .analyzer import strong_straightness

        self.desc = desc
        self.binding = Binding(desc)
        self.indexed = index_rules(desc.rules)
        self.actions, pattern_actions = compile_actions(self.indexed, self.binding)
        self.automaton: Automaton = build_automaton(self.indexed, pattern_actions)
        self.strong_straightness = strong_straightness(desc)
        self.cap = resolve_cap(cap, self.strong_straightness)
        self.n_vertices = len(desc.board.vertices)
        # per flat state: (index, kind, arg) of every readable action
        self._ops = [tuple((j, self.actions[j].kind, self.actions[j].arg) for j in succ)
                     for succ in self.automaton.succ]
        self._ids = itertools.count()
        self._memo: Dict[tuple, bool] = {}
        self._out: List[Move] = []
        self._limit: Optional[int] = None

    # ------------------------------------------------------------ states

    def initial_state(self) -> GameState:
        """The initial game state (keeper to move, rules index 0)."""
        return self.binding.initial_state()

    def root(self, debug: bool = False) -> GameState:
        """Keeper completion of the initial state."""
        return self.keeper_completion(self.initial_state(), debug=debug)

    # ------------------------------------------------------------ search

    def legal_moves(self, state: GameState, limit: Optional[int] = None) -> List[Move]:
        """All legal moves in DFS discovery order (at most ``limit`` of them)."""
        self._memo = {}
        self._out = []
        self._limit = limit
        semi = state.semi
        saved_pos, saved_index = semi.position, state.rules_index
        try:
            self._search(semi, state.rules_index, semi.position, [], 0, False)
        except _Stop:
            pass
        except StraightnessCapExceeded as exc:
            if exc.state is None:
                semi.position = saved_pos
                exc.state = state.copy()
            raise
        finally:
            semi.position = saved_pos
            state.rules_index = saved_index
            self._memo = {}
        out, self._out = self._out, []
        return out

    def eval_pattern(self, pattern_index: int, state: GameState) -> bool:
        """Validity of the pattern action with index ``pattern_index`` at ``state``."""
        action = self.actions[pattern_index]
        if action.kind != PATTERN:
            raise ValueError(f"action {pattern_index} is not a pattern")
        self._memo = {}
        semi = state.semi
        pos = semi.position
        try:
            return self._pattern(action, semi, pos, 0, -1)
        finally:
            semi.position = pos
            self._memo = {}

    def _pattern(self, action, semi, pos, n_mods, prefix_id) -> bool:
        positive, k = action.arg
        key = (k, prefix_id, pos)
        found = self._memo.get(key)
        if found is None:
            start = self.automaton.pattern_start[k]
            found = self._search(semi, start, pos, None, n_mods, True)
            semi.position = pos
            self._memo[key] = found
        return found if positive else not found

    def _search(self, semi, start, pos, move, n_mods, in_pattern) -> bool:
        """DFS for one modifier prefix. In pattern mode returns whether a final state is reachable."""
        prefix_id = next(self._ids)
        ops = self._ops
        accept = self.automaton.accept
        nv = self.n_vertices
        pieces = semi.pieces
        visited = set()
        applied = set()
        stack = [(start, pos)]
        while stack:
            s, v = stack.pop()
            key = s * nv + v
            if key in visited:
                continue
            visited.add(key)
            if in_pattern and accept[s]:
                return True
            children = []
            for j, kind, arg in ops[s]:
                if kind == SHIFT:
                    t = arg[v]
                    if t >= 0:
                        children.append((j, t))
                elif kind == ON:
                    if pieces[v] in arg:
                        children.append((j, v))
                elif kind == COMPARE:
                    x = arg[0](semi)
                    y = arg[2](semi)
                    if x is not None and y is not None and arg[1](x, y):
                        children.append((j, v))
                elif kind == PATTERN:
                    semi.position = v
                    if self._pattern(self.actions[j], semi, v, n_mods, prefix_id):
                        children.append((j, v))
                elif kind == SWITCH:
                    if in_pattern or (j, v) in applied:
                        continue
                    applied.add((j, v))
                    self._out.append(Move(move + [(j, v)]))
                    if self._limit is not None and len(self._out) >= self._limit:
                        raise _Stop
                else:
                    if (j, v) in applied:
                        continue
                    applied.add((j, v))
                    if kind == OFF:
                        old = pieces[v]
                        semi.counts[old] -= 1
                        semi.counts[arg] += 1
                        pieces[v] = arg
                    else:
                        var, value, bound = arg
                        x = value(semi)
                        if x is None or x < 0 or x > bound:
                            continue
                        old = semi.variables[var]
                        semi.variables[var] = x
                    if n_mods + 1 > self.cap:
                        self._revert(semi, kind, arg, v, old)
                        raise StraightnessCapExceeded(self.cap)
                    try:
                        if move is not None:
                            move.append((j, v))
                        found = self._search(semi, j, v, move, n_mods + 1, in_pattern)
                    finally:
                        if move is not None:
                            move.pop()
                        self._revert(semi, kind, arg, v, old)
                    if found:
                        return True
            if children:
                children.reverse()
                stack.extend(children)
        return False

    @staticmethod
    def _revert(semi, kind, arg, v, old):
        if kind == OFF:
            semi.counts[semi.pieces[v]] -= 1
            semi.counts[old] += 1
            semi.pieces[v] = old
        else:
            semi.variables[arg[0]] = old

    # ------------------------------------------------------------ moves

    def _pattern_eval(self, action, state):
        return self._pattern(action, state.semi, state.semi.position, 0, next(self._ids))

    def play(self, state: GameState, move: Sequence[Tuple[int, int]]) -> list:
        """Apply ``move`` in place; returns the undo log for :meth:`unplay`."""
        if not move:
            raise IllegalMove("a move needs at least a switch")
        log = []
        semi = state.semi
        last = len(move) - 1
        for n, (i, v) in enumerate(move):
            if not 0 < i < len(self.actions) or not 0 <= v < self.n_vertices:
                self.unplay(state, log)
                raise IllegalMove(f"no modifier application ({i}, {v})")
            a = self.actions[i]
            if not a.is_modifier or (a.kind == SWITCH) != (n == last):
                self.unplay(state, log)
                raise IllegalMove(f"action {i} cannot appear at step {n} of a move")
            pos_before = semi.position
            semi.position = v
            ok, rec = try_apply(a, state, i)
            if not ok:
                semi.position = pos_before
                self.unplay(state, log)
                raise IllegalMove(f"modifier {i} is not valid at vertex {v}")
            log.append((rec, pos_before))
        return log

    @staticmethod
    def unplay(state: GameState, log: list) -> None:
        for rec, pos_before in reversed(log):
            undo(state, rec)
            state.semi.position = pos_before
        log.clear()

    def apply_move(self, state: GameState, move: Sequence[Tuple[int, int]]) -> GameState:
        """New state after replaying ``move`` (no search involved)."""
        out = state.copy()
        self.play(out, move)
        return out

    def keeper_completion(self, state: GameState, debug: bool = False) -> GameState:
        """Play the keeper's first move until another player is to move or the keeper is stuck."""
        if debug:
            return self._keeper_completion_debug(state)
        st = state.copy()
        steps = 0
        while st.semi.player == KEEPER:
            moves = self.legal_moves(st, limit=1)
            if not moves:
                break
            self.play(st, moves[0])
            steps += 1
            if steps > KEEPER_STEP_LIMIT:
                raise ReasonerError("keeper did not finish within the step limit")
        return st

    def _keeper_completion_debug(self, state: GameState) -> GameState:
        if state.semi.player != KEEPER:
            return state.copy()
        completions: Dict[tuple, GameState] = {}
        seen = set()
        stack = [state.copy()]
        while stack:
            st = stack.pop()
            k = st.key()
            if k in seen:
                continue
            seen.add(k)
            if len(seen) > KEEPER_STEP_LIMIT:
                raise ReasonerError("keeper did not finish within the step limit")
            if st.semi.player != KEEPER:
                completions.setdefault(k, st)
                continue
            moves = self.legal_moves(st)
            if not moves:
                completions.setdefault(k, st)
                continue
            for m in reversed(moves):
                stack.append(self.apply_move(st, m))
        if len(completions) > 1:
            raise KeeperNondeterminism(list(completions.values()), state.copy())
        return next(iter(completions.values()))

    def successor(self, state: GameState, move, debug: bool = False) -> GameState:
        return self.keeper_completion(self.apply_move(state, move), debug=debug)

    def is_terminal(self, state: GameState) -> bool:
        return not self.legal_moves(state, limit=1)

    def scores(self, state: GameState) -> List[int]:
        return list(state.semi.variables[:len(self.binding.players)])

    # ------------------------------------------------------------ display

    def describe_move(self, move) -> str:
        names = self.desc.board.vertices
        return " ".join(f"({i},{names[v]})" for i, v in move)

    def dump(self, state: GameState) -> str:
        """Board as a piece listing in vertex order plus the variable table."""
        b = self.binding
        semi = state.semi
        lines = [f"player: {b.player_name(semi.player)}  rules index: {state.rules_index}  "
                 f"position: {self.desc.board.vertices[semi.position]}"]
        grid = _grid_layout(self.desc.board.vertices)
        if grid is not None:
            for row in grid:
                lines.append(" ".join(
                    "." if v is None else b.pieces[semi.pieces[v]][:1] for v in row))
        else:
            for v, name in enumerate(self.desc.board.vertices):
                lines.append(f"{name}: {b.pieces[semi.pieces[v]]}")
        for name, value in zip(b.variables, semi.variables):
            lines.append(f"{name} = {value}")
        return "\n".join(lines)


def _grid_layout(names):
    """Rows of vertex indices when names look like generated ``v<col><row>``, else None."""
    coords = {}
    for i, n in enumerate(names):
        if not n.startswith("v"):
            return None
        body = n[1:]
        parts = body.split("_") if "_" in body else (list(body) if len(body) == 2 else None)
        if parts is None or len(parts) != 2 or not all(p.isdigit() for p in parts):
            return None
        coords[(int(parts[0]), int(parts[1]))] = i
    x0 = min(x for x, _ in coords)
    y0 = min(y for _, y in coords)
    xs = max(x for x, _ in coords) + 1
    ys = max(y for _, y in coords) + 1
    return [[coords.get((x, y)) for x in range(x0, xs)] for y in range(y0, ys)]


def load_game(source: str, cap: Optional[int] = None, source_name: str = "<string>") -> Game:
    """Compile HL or LL text and build a :class:`Game`."""
    from .frontend import compile_hl_to_ll
    from .lexer import tokenize
    from .parser import parse_description

    desc = parse_description(compile_hl_to_ll(tokenize(source, source_name)))
    return Game(desc, cap)
