import pytest
from hypothesis import given, strategies as st

from rbg.errors import MixedCommaList, RbgSyntaxError, ZeroPower
from rbg.frontend import format_rules_tokens
from rbg.lexer import tokenize
from rbg.parser import parse_rules
from rbg.sugar import desugar


def lower(text):
    return format_rules_tokens(list(desugar(tokenize(text))))


@pytest.mark.parametrize("src, expected", [
    ("up^8", "up up up up up up up up"),
    ("up^1", "up"),
    ("[$ player1 = 0,player2 = 100]", "[$player1=0][$player2=100]"),
    ("[a, b, c]", "([a] + [b] + [c])"),
    ("(up left)^2", "(up left) (up left)"),
    ("{?up}^2", "{?up} {?up}"),
    ("up*^2", "up* up*"),
    ("[x]", "[x]"),
])
def test_examples(src, expected):
    assert lower(src) == expected


def test_promotion_shape_keeps_precedence():
    # the comma off binds as one element inside a concatenation
    rules = parse_rules(desugar(tokenize("{p} [k, q] up")))
    assert len(rules.children) == 3


def test_zero_power():
    with pytest.raises(ZeroPower):
        lower("up^0")


def test_power_needs_number():
    with pytest.raises(RbgSyntaxError):
        lower("up^x")


@pytest.mark.parametrize("src", ["[a, $x=1]", "[$x=1, a]"])
def test_mixed_lists(src):
    with pytest.raises((MixedCommaList, RbgSyntaxError)):
        lower(src)


def test_ll_text_is_untouched():
    src = "up* [e] {a,b} ->white [$x=x+1]"
    assert lower(src) == lower(lower(src))
    assert parse_rules(lower(src)) == parse_rules(src)


@given(st.integers(1, 12))
def test_power_is_repetition(n):
    assert lower(f"left^{n}").split() == ["left"] * n
