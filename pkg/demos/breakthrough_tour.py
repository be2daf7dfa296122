"""A short tour of breakthrough: compile, analyse, count moves, play.

Run with ``python demos/breakthrough_tour.py``.
"""

from importlib import resources

from rbg import compile_source, load_game, validate
from rbg.bench import montecarlo, perft, timed

source = (resources.files("rbg.games") / "breakthrough.rbg").read_text()

# The high-level file uses a board generator and a turn macro; the compiled
# form spells out all 64 vertices and both turns.
ll = compile_source(source)
print(ll.splitlines()[0])
print(f"compiled LL text: {len(ll.splitlines())} lines")

game = load_game(source)
for d in validate(game.desc):
    print(d)

root = game.root()
moves = game.legal_moves(root)
print(f"white has {len(moves)} opening moves, e.g. {game.describe_move(moves[0])}")

for depth in range(1, 4):
    (leaves, computed, _), secs = timed(perft, game, depth)
    print(f"perft {depth}: {leaves:>6} leaves  ({computed / secs:,.0f} nodes/s)")

summary = montecarlo(game, playouts=10, seed=7)
print("mean scores over 10 random games:", summary.mean_scores())
