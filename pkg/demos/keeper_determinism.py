"""Why the keeper must be deterministic.

After ``->>`` the keeper may go left or right; both branches end with the same
player to move but at different positions, so the game is not proper. The fast
path silently takes the first branch, the debug path refuses.
"""

from rbg import load_game
from rbg.errors import KeeperNondeterminism

SOURCE = """
#players = p(1)
#pieces = e
#variables =
#board = middle[e]{left: west, right: east} west[e]{} east[e]{}
#rules = ->> (left + right) ->p
"""

game = load_game(SOURCE)
root = game.root()
print("fast path lands on", game.desc.board.vertices[root.semi.position])

try:
    game.root(debug=True)
except KeeperNondeterminism as exc:
    where = sorted(game.desc.board.vertices[s.semi.position] for s in exc.completions)
    print("debug path:", exc)
    print("completions end at", where)
