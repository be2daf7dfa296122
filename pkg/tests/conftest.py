import functools
import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rbg.reasoner import Game, load_game  # noqa: E402

GAMES = ["breakthrough", "breakthrough3x3", "tictactoe", "connect4", "keeper_nondeterministic"]
PROPER_GAMES = [g for g in GAMES if g != "keeper_nondeterministic"]


def game_source(name: str) -> str:
    return (resources.files("rbg.games") / f"{name}.rbg").read_text(encoding="utf-8")


@functools.lru_cache(maxsize=None)
def cached_game(name: str) -> Game:
    return load_game(game_source(name))


@pytest.fixture(scope="session")
def breakthrough():
    return cached_game("breakthrough")


@pytest.fixture(scope="session")
def bt3():
    return cached_game("breakthrough3x3")


@pytest.fixture(scope="session")
def tictactoe():
    return cached_game("tictactoe")
