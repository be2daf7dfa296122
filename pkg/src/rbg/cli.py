"""Command line: ``rbg perft|mc|compile|validate|simulate``.

Exit codes: 0 success, 1 usage error, 2 parse or validation error,
3 runtime error (straightness cap, keeper nondeterminism, ...).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path
from typing import List, Optional

from . import bench
from .analyzer import has_errors, validate
from .errors import RbgError, ReasonerError
from .frontend import compile_hl_to_ll, description_to_json, format_ll
from .lexer import tokenize
from .parser import parse_description
from .reasoner import Game

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RUNTIME = 0, 1, 2, 3
PAPER_INTERPRETER_NPS = 5_113_725  # breakthrough perft, published interpreter figure


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class UsageError(Exception):
    pass


def bundled_games() -> List[str]:
    return sorted(p.name[:-4] for p in resources.files("rbg.games").iterdir() if p.name.endswith(".rbg"))


def resolve_game(name: str) -> Path:
    """A path to an existing file, or the name of a bundled game (with or without .rbg)."""
    p = Path(name)
    if p.is_file():
        return p
    stem = name[:-4] if name.endswith(".rbg") else name
    stem = Path(stem).name
    candidate = resources.files("rbg.games") / f"{stem}.rbg"
    if candidate.is_file():
        return Path(str(candidate))
    raise UsageError(f"no such game file or bundled game: {name!r} (bundled: {', '.join(bundled_games())})")


def _read(args):
    path = resolve_game(args.file)
    return path.read_text(encoding="utf-8"), path


_current_game: List[Game] = []


def _load(args):
    text, path = _read(args)
    desc = parse_description(compile_hl_to_ll(tokenize(text, str(path))))
    game = Game(desc, args.cap)
    _current_game[:] = [game]
    return text, path, game


def cmd_perft(args) -> int:
    text, path, game = _load(args)
    if args.threads > 1:
        (leaves, computed, applied), secs = bench.timed(
            bench.perft_parallel, text, args.depth, args.threads, args.cap)
    else:
        (leaves, computed, applied), secs = bench.timed(bench.perft, game, args.depth)
    rec = bench.BenchRecord(path.stem, "perft", depth=args.depth, nodes=leaves, cap=game.cap,
                            extra={"computed_nodes": computed, "applied_moves": applied,
                                   "threads": args.threads}).finish(secs)
    rate = computed / secs if secs > 0 else 0.0
    if args.json:
        print(rec.to_json())
    else:
        print(f"{'game':<16}{'depth':>6}{'nodes':>12}{'time [ms]':>12}{'computed/s':>14}")
        print(f"{rec.game:<16}{args.depth:>6}{leaves:>12}{rec.elapsed_ms:>12.1f}{rate:>14.0f}")
        print(f"(published interpreter throughput for breakthrough: {PAPER_INTERPRETER_NPS:,} nodes/s)")
    return EXIT_OK


def cmd_mc(args) -> int:
    text, path, game = _load(args)
    if args.threads > 1:
        summary, secs = bench.timed(bench.montecarlo_parallel, text, args.playouts, args.seed,
                                    args.threads, args.cap, args.max_plies)
    else:
        summary, secs = bench.timed(bench.montecarlo, game, args.playouts, args.seed, args.max_plies)
    rec = bench.BenchRecord(path.stem, "mc", playouts=args.playouts, nodes=summary.nodes, cap=game.cap,
                            seed=args.seed, extra={"mean_scores": summary.mean_scores()}).finish(secs)
    if args.json:
        print(rec.to_json())
    else:
        print(f"{'game':<16}{'playouts':>9}{'nodes':>12}{'time [ms]':>12}{'nodes/s':>12}")
        print(f"{rec.game:<16}{args.playouts:>9}{rec.nodes:>12}{rec.elapsed_ms:>12.1f}{rec.nodes_per_second:>12.0f}")
        for p, v in summary.mean_scores().items():
            print(f"  mean score {p}: {v:.2f}")
    return EXIT_OK


def cmd_compile(args) -> int:
    text, path = _read(args)
    stream = compile_hl_to_ll(tokenize(text, str(path)))
    desc = parse_description(stream)  # the output must be a valid LL description
    if args.dump_json or args.dump_nfa:
        if args.dump_json:
            print(json.dumps(description_to_json(desc), indent=2))
        if args.dump_nfa:
            print(Game(desc, args.cap).automaton.to_dot())
        return EXIT_OK
    sys.stdout.write(format_ll(stream))
    return EXIT_OK


def cmd_validate(args) -> int:
    text, path = _read(args)
    desc = parse_description(compile_hl_to_ll(tokenize(text, str(path))))
    diags = validate(desc)
    for d in diags:
        print(d)
    if has_errors(diags):
        return EXIT_INPUT
    if args.debug_keeper or args.sample_straightness:
        game = Game(desc, args.cap)
        _current_game[:] = [game]
        if args.debug_keeper:
            checked = _check_keeper(game, args.keeper_depth)
            print(f"INFO KeeperDeterminism: {checked} states checked, one completion each")
        if args.sample_straightness:
            k = bench.sample_straightness(game, args.sample_straightness, args.seed, args.max_plies)
            print(f"INFO SampledStraightness: at least {k} (from {args.sample_straightness} random plays)")
    return EXIT_OK


def _check_keeper(game: Game, depth: int) -> int:
    frontier = [game.root(debug=True)]
    checked = 1
    for _ in range(depth):
        nxt = []
        for st in frontier:
            for m in game.legal_moves(st):
                nxt.append(game.successor(st, m, debug=True))
                checked += 1
        frontier = nxt
    return checked


def cmd_simulate(args) -> int:
    _, path, game = _load(args)
    rng = bench.playout_rng(args.seed, 0)
    st = game.root()
    print(game.dump(st))
    ply = 0
    while ply < args.max_plies:
        moves = game.legal_moves(st)
        if not moves:
            print("terminal; scores: " + ", ".join(
                f"{p}={s}" for p, s in zip(game.binding.players, game.scores(st))))
            return EXIT_OK
        m = moves[int(rng.integers(len(moves)))]
        mover = game.binding.player_name(st.semi.player)
        st = game.successor(st, m)
        ply += 1
        print(f"\nply {ply}: {mover} plays {game.describe_move(m)} ({len(moves)} legal)")
        print(game.dump(st))
    print(f"stopped after {ply} plies")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=None,
                        help="straightness cap (default: RBG_CAP, then strong straightness, then 1024)")
    p = _Parser(prog="rbg", description="Regular Boardgames toolchain")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("perft", parents=[common], help="count game-tree nodes to a fixed depth")
    s.add_argument("file")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_perft)

    s = sub.add_parser("mc", parents=[common], help="flat Monte Carlo playouts")
    s.add_argument("file")
    s.add_argument("--playouts", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--max-plies", type=int, default=None)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("compile", parents=[common], help="print the canonical LL form")
    s.add_argument("file")
    s.add_argument("--dump-json", action="store_true", help="print the parsed description as JSON")
    s.add_argument("--dump-nfa", action="store_true", help="print the rules automata in DOT")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("validate", parents=[common], help="static checks and diagnostics")
    s.add_argument("file")
    s.add_argument("--debug-keeper", action="store_true",
                   help="check that every keeper turn has one completion (near the root)")
    s.add_argument("--keeper-depth", type=int, default=2)
    s.add_argument("--sample-straightness", type=int, default=0, metavar="PLAYS",
                   help="estimate real straightness from random plays (best effort)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-plies", type=int, default=None)
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("simulate", parents=[common], help="play one random game and print it")
    s.add_argument("file")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-plies", type=int, default=1000)
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("depth", "playouts", "threads", "max_plies", "keeper_depth"):
        value = getattr(args, name, None)
        if value is not None and value < 0:
            parser.error(f"--{name.replace('_', '-')} must not be negative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"rbg: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ReasonerError as exc:
        print(f"rbg: runtime error: {exc}", file=sys.stderr)
        state = getattr(exc, "state", None)
        if state is not None and _current_game:
            print(_current_game[0].dump(state), file=sys.stderr)
        return EXIT_RUNTIME
    except RbgError as exc:
        print(f"rbg: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
