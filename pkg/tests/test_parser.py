import pytest
from hypothesis import given, settings

from conftest import game_source
from rbg.errors import (
    DisjointnessViolation, DuplicateEdgeLabel, DuplicateSection, MissingSection, RbgSyntaxError,
    UndeclaredIdentifier,
)
from rbg.model import (
    Action, Assignment, BinOp, Comparison, Concat, Constant, NameRef, On, Pattern, Shift, Star,
    Sum, Switch, format_rules, iter_actions,
)
from rbg.parser import index_rules, parse_description, parse_rules
from strategies import expressions

HEADER = "#players = p(1)\n#pieces = e, x\n#variables =\n"


def desc_with(board="a[e]{}", rules="->p", header=HEADER):
    return parse_description(header + "#board = " + board + "\n#rules = " + rules)


def test_appendix_3x3():
    desc = parse_description(game_source("breakthrough3x3"))
    assert len(desc.board.vertices) == 9
    assert desc.board.vertices[desc.board.start_vertex] == "v11"
    assert desc.pieces == ("whitePawn", "blackPawn", "empty")
    assert desc.variables == {}
    assert desc.players == {"white": 100, "black": 100}
    assert desc.board.neighbour("v22", "left") == "v12"
    assert desc.board.neighbour("v13", "up") is None


def test_indexing_example():
    indexed = index_rules(parse_rules("up left + [x] (up [y])*"))
    assert indexed.size == 5
    texts = [str(a.spec) for a in indexed.actions[1:]]
    assert texts == ["up", "left", "[x]", "up", "[y]"]


def test_pattern_bodies_are_indexed_after_the_pattern():
    indexed = index_rules(parse_rules("up {? left [x]} ->p"))
    assert [str(a.spec) for a in indexed.actions[1:]] == ["up", "{?left [x]}", "left", "[x]", "->p"]
    assert indexed.actions[2].spec.body.children[0].index == 3


def test_actions_parse():
    rules = parse_rules("{a, b} [$ x = 2 * (y - 1) / 3] {$ x >= y} ->> ->p {! up} {}")
    specs = [a.spec for a in iter_actions(rules, into_patterns=False)]
    assert specs[0] == On(("a", "b"))
    assert specs[1] == Assignment("x", BinOp("/", BinOp("*", Constant(2), BinOp("-", NameRef("y"), Constant(1))),
                                             Constant(3)))
    assert specs[2] == Comparison(NameRef("x"), ">=", NameRef("y"))
    assert specs[3] == Switch(None) and specs[4] == Switch("p")
    assert specs[5] == Pattern(False, Action(Shift("up")))
    assert specs[6] == On(())


def test_precedence():
    rules = parse_rules("a b* + c")
    assert isinstance(rules, Sum)
    assert isinstance(rules.children[0], Concat)
    assert isinstance(rules.children[0].children[1], Star)


@pytest.mark.parametrize("text", ["", "a +", "(a", "a)", "[", "{$ x}", "[$ x 1]", "->", "a**"])
def test_syntax_errors(text):
    with pytest.raises(RbgSyntaxError):
        parse_rules(text)


def test_syntax_error_lists_expected():
    with pytest.raises(RbgSyntaxError) as err:
        parse_rules("(a")
    assert err.value.span is not None


def test_empty_variables_and_empty_neighbours():
    desc = desc_with("a[e]{}")
    assert desc.variables == {} and desc.board.directions == []


def test_duplicate_edge_label():
    with pytest.raises(DuplicateEdgeLabel):
        desc_with("a[e]{up: b, up: a} b[e]{}")


def test_undeclared_names():
    with pytest.raises(UndeclaredIdentifier):
        desc_with("a[e]{}", "->q")
    with pytest.raises(UndeclaredIdentifier):
        desc_with("a[z]{}")
    with pytest.raises(UndeclaredIdentifier):
        desc_with("a[e]{}", "left ->p")
    with pytest.raises(UndeclaredIdentifier):
        desc_with("a[e]{}", "[$ y = 1] ->p")


def test_piece_counts_in_arithmetic_resolve():
    desc = desc_with("a[e]{}", "{$ e == 1} ->p")
    assert desc.rules.children[0].spec.left == NameRef("e")


def test_disjoint_names():
    with pytest.raises(DisjointnessViolation):
        desc_with(header="#players = p(1)\n#pieces = p\n#variables =\n", board="a[p]{}")
    with pytest.raises(DisjointnessViolation):
        desc_with(header="#players = p(1)\n#pieces = e\n#variables = e(2)\n")


def test_sections():
    with pytest.raises(MissingSection):
        parse_description(HEADER + "#board = a[e]{}")
    with pytest.raises(DuplicateSection):
        parse_description(HEADER + "#board = a[e]{}\n#rules = ->p\n#rules = ->p")


def test_sections_in_any_order():
    desc = parse_description("#rules = ->p\n#board = a[e]{}\n#variables =\n#pieces = e\n#players = p(1)")
    assert desc.players == {"p": 1}


@given(expressions(max_actions=8, with_patterns=True))
def test_indexing_is_a_bijection(expr):
    indexed = index_rules(expr)
    seen = [a.index for a in iter_actions(indexed.expr)]
    assert sorted(seen) == list(range(1, indexed.size + 1))
    assert seen == list(range(1, indexed.size + 1))  # pre-order
    assert all(indexed.actions[i].index == i for i in seen)


@settings(max_examples=200)
@given(expressions(max_actions=8, with_patterns=True))
def test_print_parse_round_trip(expr):
    assert parse_rules(format_rules(expr)) == expr
