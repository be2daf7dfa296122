import pytest

from conftest import cached_game
from rbg.errors import BoundExceeded
from rbg.oracle import (
    EPS, NULL, Oracle, accepts, act, alt, cat, derivative, first, in_prefixes, nullable, oracle_straightness, star,
    to_term,
)
from rbg.parser import index_rules, parse_description, parse_rules


def term(text):
    return to_term(index_rules(parse_rules(text)).expr)


def test_smart_constructors():
    a, b = act(1), act(2)
    assert alt(a, b) == alt(b, a) == alt(a, alt(b, a))
    assert alt(a, NULL) == a
    assert cat(EPS, a) == a and cat(a, NULL) == NULL
    assert cat(cat(a, b), a) == cat(a, cat(b, a))
    assert star(star(a)) == star(a) and star(EPS) == EPS


def test_derivatives():
    t = term("up left + [x] (up [y])*")
    assert first(t) == {1, 3}
    assert not nullable(t)
    assert accepts(t, [1, 2])
    assert accepts(t, [3, 4, 5, 4, 5])
    assert not accepts(t, [3, 4])
    assert in_prefixes(t, [3, 4])
    assert derivative(t, 2) == NULL


def test_derivative_set_is_finite():
    t = term("((a + b)* a (a + b))*")
    seen = {t}
    frontier = [t]
    while frontier:
        cur = frontier.pop()
        for i in (1, 2, 3, 4):
            d = derivative(cur, i)
            if d not in seen:
                seen.add(d)
                frontier.append(d)
    assert len(seen) < 20


def test_tictactoe_root(tictactoe):
    o = Oracle(tictactoe.desc)
    root = o.root()
    assert len(o.legal_moves(root)) == 9
    assert len(o.successors(root)) == 9


def test_oracle_perft_3x3(bt3):
    o = Oracle(bt3.desc)
    assert [o.perft(o.root(), d) for d in range(4)] == [1, 7, 42, 174]


def test_completions_of_nondeterministic_keeper():
    game = cached_game("keeper_nondeterministic")
    o = Oracle(game.desc)
    assert len(o.completions(o.initial())) == 2
    with pytest.raises(ValueError):
        o.root()


def test_bound():
    desc = parse_description("#players = p(1)\n#pieces = e\n#variables =\n#board = a[e]{r: b} b[e]{r: c} "
                             "c[e]{r: d} d[e]{}\n#rules = r r r ->p")
    assert len(Oracle(desc, depth_bound=8).legal_moves(Oracle(desc).initial())) == 1
    with pytest.raises(BoundExceeded):
        o = Oracle(desc, depth_bound=2)
        o.legal_moves(o.initial())


def test_straightness_enumeration():
    assert oracle_straightness(parse_rules("[a]->>[b][c][d]->>[e][f]"), 10).value == 3
    assert oracle_straightness(parse_rules("[a][b](->>+[c])[d]"), 10).value == 4
    assert oracle_straightness(parse_rules("{? [a][b][c]} ->p"), 6).value == 3
    # a short bound only sees part of the words
    assert oracle_straightness(parse_rules("[a][b][c][d]"), 2).value == 2
