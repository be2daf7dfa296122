import pytest
from hypothesis import given, strategies as st

from rbg.errors import UnexpectedCharacter, UnterminatedComment
from rbg.lexer import Kind, lex_single, tokenize


def kinds(text):
    return [t.kind for t in tokenize(text)]


def test_keeper_switch_is_one_token():
    assert kinds("->>") == [Kind.KEEPER_ARROW]


def test_comment_separates_tokens():
    toks = tokenize("->/**/>")
    assert [t.text for t in toks] == ["->", ">"]


def test_empty_input():
    assert list(tokenize("")) == []


def test_line_comments_and_spans():
    toks = tokenize("#rules = // comment\n  up*")
    assert [t.text for t in toks] == ["#", "rules", "=", "up", "*"]
    up = toks[3]
    assert (up.span.line, up.span.column, up.span.offset, up.span.length) == (2, 3, 22, 2)


def test_keywords_are_case_sensitive():
    assert kinds("rules Rules") == [Kind.RULES, Kind.IDENT]


def test_brace_question_needs_no_space():
    assert kinds("{? up}") == [Kind.LBRACE_QUESTION, Kind.IDENT, Kind.RBRACE]
    assert kinds("{ ?") == [Kind.LBRACE, Kind.QUESTION]


def test_assign_bang_lexes_as_two_tokens():
    assert kinds("=!") == [Kind.ASSIGN, Kind.BANG]


def test_comments_do_not_nest():
    assert [t.text for t in tokenize("/* /* */ x */")] == ["x", "*", "/"]


def test_non_ascii_only_in_comments():
    assert [t.text for t in tokenize("// żółw\nx")] == ["x"]
    with pytest.raises(UnexpectedCharacter):
        tokenize("żółw")


def test_unexpected_character_span():
    with pytest.raises(UnexpectedCharacter) as err:
        tokenize("up\n  @")
    assert (err.value.span.line, err.value.span.column) == (2, 3)


def test_unterminated_comment():
    with pytest.raises(UnterminatedComment):
        tokenize("x /* never closed")


def test_nat_and_ident_shapes():
    toks = tokenize("v12 12v 007")
    assert [(t.kind, t.text) for t in toks] == [
        (Kind.IDENT, "v12"), (Kind.NAT, "12"), (Kind.IDENT, "v"), (Kind.NAT, "007")]


def test_lex_single():
    assert lex_single("xy").kind is Kind.IDENT
    assert lex_single("8y") is None
    assert lex_single("12").kind is Kind.NAT


SAMPLE_TOKENS = [k.value for k in Kind if k not in (Kind.IDENT, Kind.NAT)] + ["x", "up", "v1", "42"]


@given(st.lists(st.sampled_from(SAMPLE_TOKENS), max_size=12))
def test_space_separated_round_trip(texts):
    toks = tokenize(" ".join(texts))
    assert [t.text for t in toks] == texts
    again = tokenize(" ".join(t.text for t in toks))
    assert [(t.kind, t.text) for t in again] == [(t.kind, t.text) for t in toks]


@given(st.lists(st.sampled_from(SAMPLE_TOKENS), min_size=1, max_size=8))
def test_greedy_longest_match(texts):
    source = "".join(texts)
    try:
        toks = tokenize(source)
    except UnterminatedComment:
        return  # "/" followed by "*" opens a comment
    pos = 0
    for t in toks:
        assert source.startswith(t.text, pos) or source[pos:].lstrip().startswith(t.text)
        # no longer token is possible at this position
        for cand in SAMPLE_TOKENS:
            if len(cand) > len(t.text) and source.startswith(cand, t.span.offset):
                if lex_single(cand) is not None and not cand[len(t.text):].isalnum():
                    assert not cand.startswith(t.text), (t.text, cand)
        pos = t.span.offset + t.span.length


@given(st.text(alphabet="ab1 +-*/(){}[]<>=!?$#~;:,^\n", max_size=30))
def test_tokenize_is_deterministic(source):
    try:
        first = [(t.kind, t.text, t.span) for t in tokenize(source)]
    except UnterminatedComment:
        return
    assert first == [(t.kind, t.text, t.span) for t in tokenize(source)]
