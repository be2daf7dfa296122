"""Perft and flat Monte Carlo, the two standard throughput measures."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from .reasoner import Game, load_game


@dataclass
class BenchRecord:
    game: str
    command: str
    depth: Optional[int] = None
    playouts: Optional[int] = None
    nodes: int = 0
    elapsed_ms: float = 0.0
    nodes_per_second: float = 0.0
    cap: int = 0
    seed: Optional[int] = None
    extra: dict = field(default_factory=dict)

    def finish(self, seconds: float) -> "BenchRecord":
        self.elapsed_ms = seconds * 1000.0
        self.nodes_per_second = self.nodes / seconds if seconds > 0 else 0.0
        return self

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def deterministic_part(self) -> dict:
        d = asdict(self)
        d.pop("elapsed_ms")
        d.pop("nodes_per_second")
        return d


class _Counts:
    __slots__ = ("computed", "applied")

    def __init__(self):
        self.computed = 0
        self.applied = 0


def _perft(game: Game, state, depth: int, counts: _Counts) -> int:
    if depth == 0:
        return 1
    total = 0
    for m in game.legal_moves(state):
        child = game.successor(state, m)
        counts.applied += 1
        counts.computed += 1
        total += _perft(game, child, depth - 1, counts)
    return total


def perft(game: Game, depth: int, state=None) -> tuple:
    """(leaf nodes at ``depth``, computed nodes, applied moves). Keeper states are not counted."""
    if state is None:
        state = game.root()
    counts = _Counts()
    counts.computed = 1
    leaves = _perft(game, state, depth, counts)
    # every computed node except the root was produced by exactly one applied move
    assert counts.computed == counts.applied + 1
    return leaves, counts.computed, counts.applied


def _perft_worker(args):
    source, cap, moves, depth = args
    game = load_game(source, cap)
    root = game.root()
    leaves = computed = applied = 0
    for m in moves:
        child = game.successor(root, m)
        n, c, a = perft(game, depth - 1, child)
        leaves += n
        computed += c
        applied += a + 1
    return leaves, computed, applied


def perft_parallel(source: str, depth: int, threads: int, cap: Optional[int] = None) -> tuple:
    """Perft with the root moves split over worker processes."""
    game = load_game(source, cap)
    if depth == 0 or threads <= 1:
        return perft(game, depth)
    moves = [tuple(m) for m in game.legal_moves(game.root())]
    chunks = [moves[k::threads] for k in range(threads)]
    jobs = [(source, cap, chunk, depth) for chunk in chunks if chunk]
    leaves, computed, applied = 0, 1, 0
    with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
        for n, c, a in pool.map(_perft_worker, jobs):
            leaves += n
            computed += c
            applied += a
    assert computed == applied + 1
    return leaves, computed, applied


def playout_rng(seed: int, playout: int) -> np.random.Generator:
    """Independent PCG64 stream per playout, so results do not depend on scheduling."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, playout])))


def playout(game: Game, rng: np.random.Generator, max_plies: Optional[int] = None):
    """One uniform random playout. Returns (scores, visited nodes, plies)."""
    st = game.root()
    nodes = 0
    plies = 0
    while True:
        moves = game.legal_moves(st)
        nodes += 1
        if not moves or (max_plies is not None and plies >= max_plies):
            return game.scores(st), nodes, plies
        st = game.successor(st, moves[int(rng.integers(len(moves)))])
        plies += 1


@dataclass
class MonteCarloSummary:
    playouts: int
    nodes: int
    scores: List[List[int]]       # per playout, in player order
    players: List[str]

    def mean_scores(self) -> dict:
        if not self.scores:
            return {}
        arr = np.asarray(self.scores, dtype=float)
        return {p: float(v) for p, v in zip(self.players, arr.mean(axis=0))}


def montecarlo(game: Game, playouts: int, seed: int, max_plies: Optional[int] = None) -> MonteCarloSummary:
    scores = []
    nodes = 0
    for k in range(playouts):
        s, n, _ = playout(game, playout_rng(seed, k), max_plies)
        scores.append(s)
        nodes += n
    return MonteCarloSummary(playouts, nodes, scores, list(game.binding.players))


def _mc_worker(args):
    source, cap, seed, indices, max_plies = args
    game = load_game(source, cap)
    out = []
    for k in indices:
        s, n, _ = playout(game, playout_rng(seed, k), max_plies)
        out.append((k, s, n))
    return out


def montecarlo_parallel(source: str, playouts: int, seed: int, threads: int,
                        cap: Optional[int] = None, max_plies: Optional[int] = None) -> MonteCarloSummary:
    game = load_game(source, cap)
    if threads <= 1 or playouts <= 1:
        return montecarlo(game, playouts, seed, max_plies)
    jobs = [(source, cap, seed, list(range(k, playouts, threads)), max_plies) for k in range(threads)]
    results = []
    with ProcessPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(_mc_worker, jobs):
            results.extend(part)
    results.sort()
    return MonteCarloSummary(playouts, sum(n for _, _, n in results),
                             [s for _, s, _ in results], list(game.binding.players))


def sample_straightness(game: Game, playouts: int, seed: int, max_plies: Optional[int] = None) -> int:
    """Largest number of non-switch modifiers in any legal move seen during random play.

    Includes keeper moves. Only a lower bound on the real straightness.
    """
    best = 0
    for k in range(playouts):
        rng = playout_rng(seed, k)
        st = game.initial_state()
        plies = 0
        while True:
            moves = game.legal_moves(st)
            if moves:
                best = max(best, max(len(m) - 1 for m in moves))
            if not moves or (max_plies is not None and plies >= max_plies):
                break
            st = game.apply_move(st, moves[int(rng.integers(len(moves)))])
            plies += 1
    return best


def timed(fn, *args, **kwargs):
    t = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t
