import json
from pathlib import Path

import pytest

from conftest import GAMES, game_source
from rbg.frontend import compile_hl_to_ll, compile_source, description_to_json, format_ll
from rbg.lexer import tokenize
from rbg.parser import parse_description

GOLDEN = Path(__file__).parent / "golden"

# Unrolled first turn of breakthrough, with the opponent bound to black.
FRAGMENT = ("((up*+down*)(left*+right*)) {w} [e] up ({e} + (left+right) {e,b}) ->> "
            "[w][$white=100][$black=0] ({!up} ->> {} + {?up} ->black)")


def token_texts(text):
    return [t.text for t in tokenize(text)]


def contains(haystack, needle):
    n = len(needle)
    return any(haystack[i:i + n] == needle for i in range(len(haystack) - n + 1))


def test_turn_unrolls_to_fragment():
    ll = compile_source(game_source("breakthrough"))
    rules = ll.split("#rules =", 1)[1]
    assert contains(token_texts(rules), token_texts(FRAGMENT))


def test_second_turn_swaps_roles():
    ll = compile_source(game_source("breakthrough"))
    black = ("((up*+down*)(left*+right*)) {b} [e] down ({e} + (left+right) {e,w}) ->> "
             "[b][$black=100][$white=0] ({!down} ->> {} + {?down} ->white)")
    assert contains(token_texts(ll), token_texts(black))


@pytest.mark.parametrize("name", GAMES)
def test_golden(name):
    assert compile_source(game_source(name)) == (GOLDEN / f"{name}.ll").read_text()


@pytest.mark.parametrize("name", GAMES)
def test_ll_is_a_fixed_point(name):
    ll = (GOLDEN / f"{name}.ll").read_text()
    assert compile_source(ll) == ll


def test_printer_keeps_meaning():
    src = game_source("breakthrough")
    a = parse_description(compile_hl_to_ll(tokenize(src)))
    b = parse_description(compile_source(src))
    assert a.rules == b.rules
    assert list(a.board.edges()) == list(b.board.edges())


def canonical(desc, keep_start):
    """Relabel vertices by BFS over sorted labels so isomorphic boards compare equal."""
    board = desc.board
    labels = sorted(board.directions)
    starts = [board.start_vertex] if keep_start else range(len(board.vertices))
    best = None
    for s in starts:
        order = {s: 0}
        queue = [s]
        while queue:
            v = queue.pop(0)
            for label in labels:
                t = board.delta[v][board.direction_index[label]]
                if t >= 0 and t not in order:
                    order[t] = len(order)
                    queue.append(t)
        if len(order) != len(board.vertices):
            continue
        form = sorted((order[board.vertex_index[a]], l, order[board.vertex_index[b]])
                      for a, l, b in board.edges())
        pieces = tuple(board.initial_pieces[v] for v in sorted(order, key=order.get))
        cand = (tuple(form), pieces)
        best = cand if best is None or cand < best else best
    return best


GENERATED_3X3 = """
#line(piece) = [piece,piece,piece]
#players = white(100), black(100)
#pieces = whitePawn, blackPawn, empty
#variables =
#board =
    rectangle(up,down,left,right,
        line(blackPawn)
        line(empty)
        line(whitePawn)
    )
#rules = ->white
"""


def test_rectangle_generator_matches_explicit_board():
    generated = parse_description(compile_hl_to_ll(GENERATED_3X3))
    explicit = parse_description(compile_hl_to_ll(game_source("breakthrough3x3")))
    assert len(generated.board.vertices) == len(explicit.board.vertices) == 9
    # the explicit listing starts at the bottom-left square, the generator at the top-left
    assert canonical(generated, keep_start=False) == canonical(explicit, keep_start=False)
    assert generated.board.vertices[generated.board.start_vertex] == "v00"
    assert explicit.board.vertices[explicit.board.start_vertex] == "v11"


def test_generator_inside_macro():
    src = "#b = rectangle(u,d,l,r,[e,e])\n#players = p(1)\n#pieces = e\n#variables =\n#board = b\n#rules = ->p"
    desc = parse_description(compile_hl_to_ll(src))
    assert desc.board.vertices == ["v00", "v10"]


def test_format_ll_section_order():
    src = "#rules = ->p\n#board = a[e]{}\n#variables = x(3)\n#pieces = e\n#players = p(1)"
    out = format_ll(compile_hl_to_ll(src))
    assert [line.split()[0] for line in out.splitlines() if line.startswith("#")] == [
        "#players", "#pieces", "#variables", "#board", "#rules"]


def test_json_dump():
    desc = parse_description(compile_hl_to_ll(game_source("breakthrough3x3")))
    data = json.loads(json.dumps(description_to_json(desc)))
    assert data["start"] == "v11"
    assert len(data["vertices"]) == 9
    assert data["actions"][0] == {"index": 1, "kind": "switch", "text": "->white"}
    assert [a["index"] for a in data["actions"]] == list(range(1, len(data["actions"]) + 1))
