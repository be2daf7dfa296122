"""Tokenizer shared by the low- and high-level description languages.

Tokens are taken greedily (maximal munch). Whitespace, ``//`` line comments and
``/* */`` block comments separate tokens and are dropped. Block comments do
not nest.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, List

from .errors import Span, UnexpectedCharacter, UnterminatedComment


class Kind(enum.Enum):
    IDENT = "ident"
    NAT = "nat"

    LPAREN = "("
    RPAREN = ")"
    LBRACE = "{"
    LBRACE_QUESTION = "{?"
    LBRACE_BANG = "{!"
    LBRACE_DOLLAR = "{$"
    RBRACE = "}"
    LBRACKET = "["
    LBRACKET_DOLLAR = "[$"
    RBRACKET = "]"
    TILDE = "~"
    HASH = "#"
    MINUS = "-"
    PLUS = "+"
    CARET = "^"
    SLASH = "/"
    STAR = "*"
    COMMA = ","
    SEMICOLON = ";"
    COLON = ":"
    DOLLAR = "$"
    ASSIGN = "="
    ARROW = "->"
    KEEPER_ARROW = "->>"
    BANG = "!"
    QUESTION = "?"
    NE = "!="
    EQ = "=="
    LT = "<"
    LE = "<="
    GT = ">"
    GE = ">="

    PLAYERS = "players"
    PIECES = "pieces"
    VARIABLES = "variables"
    RULES = "rules"
    BOARD = "board"
    HEXAGON = "hexagon"
    RECTANGLE = "rectangle"
    CUBOID = "cuboid"


KEYWORDS = {
    k.value: k
    for k in (
        Kind.PLAYERS, Kind.PIECES, Kind.VARIABLES, Kind.RULES,
        Kind.BOARD, Kind.HEXAGON, Kind.RECTANGLE, Kind.CUBOID,
    )
}
SECTION_KEYWORDS = frozenset(
    {Kind.PLAYERS, Kind.PIECES, Kind.VARIABLES, Kind.RULES, Kind.BOARD}
)

# longest first so the scan below is maximal munch
_PUNCT = sorted(
    (k for k in Kind if k not in KEYWORDS.values() and k not in (Kind.IDENT, Kind.NAT)),
    key=lambda k: -len(k.value),
)


@dataclass(frozen=True)
class Token:
    kind: Kind
    text: str
    span: Span = Span(0, 0, 0, 0)

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.text!r})"

    def is_word(self) -> bool:
        """Identifier or keyword (anything that starts with a letter)."""
        return self.kind is Kind.IDENT or self.kind in KEYWORDS.values()


class TokenStream(list):
    """A list of tokens with the name of the source it came from."""

    def __init__(self, tokens=(), source_name: str = "<string>"):
        super().__init__(tokens)
        self.source_name = source_name

    @property
    def tokens(self) -> List[Token]:
        return list(self)

    def texts(self) -> List[str]:
        return [t.text for t in self]


def _is_alpha(c: str) -> bool:
    return ("a" <= c <= "z") or ("A" <= c <= "Z")


def _is_digit(c: str) -> bool:
    return "0" <= c <= "9"


def _scan(source: str) -> Iterator[Token]:
    n = len(source)
    i = 0
    line = 1
    line_start = 0

    def span(start, length):
        return Span(line, start - line_start + 1, start, length)

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line += 1
            line_start = i
            continue
        if c in " \t\r\f\v":
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j < 0 else j
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise UnterminatedComment("unterminated /* comment", span(i, 2))
            for k in range(i, j):
                if source[k] == "\n":
                    line += 1
                    line_start = k + 1
            i = j + 2
            continue
        if _is_alpha(c):
            j = i + 1
            while j < n and (_is_alpha(source[j]) or _is_digit(source[j])):
                j += 1
            text = source[i:j]
            yield Token(KEYWORDS.get(text, Kind.IDENT), text, span(i, j - i))
            i = j
            continue
        if _is_digit(c):
            j = i + 1
            while j < n and _is_digit(source[j]):
                j += 1
            yield Token(Kind.NAT, source[i:j], span(i, j - i))
            i = j
            continue
        for kind in _PUNCT:
            if source.startswith(kind.value, i):
                yield Token(kind, kind.value, span(i, len(kind.value)))
                i += len(kind.value)
                break
        else:
            raise UnexpectedCharacter(f"unexpected character {c!r}", span(i, 1))


def tokenize(source: str, source_name: str = "<string>") -> TokenStream:
    """Split ``source`` into tokens; raises on characters that begin no token."""
    return TokenStream(_scan(source), source_name)


def lex_single(text: str):
    """Return the token ``text`` lexes to, or None if it is not exactly one token."""
    try:
        toks = tokenize(text)
    except (UnexpectedCharacter, UnterminatedComment):
        return None
    if len(toks) != 1 or toks[0].text != text:
        return None
    return toks[0]
