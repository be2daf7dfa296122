"""Rewrite ``E^n`` and comma lists inside ``[ ]`` into plain LL syntax."""

from __future__ import annotations

from typing import List

from .errors import MixedCommaList, RbgSyntaxError, ZeroPower
from .lexer import Kind, Token, TokenStream

_OPEN = {
    Kind.LPAREN: Kind.RPAREN, Kind.LBRACKET: Kind.RBRACKET, Kind.LBRACKET_DOLLAR: Kind.RBRACKET,
    Kind.LBRACE: Kind.RBRACE, Kind.LBRACE_QUESTION: Kind.RBRACE,
    Kind.LBRACE_BANG: Kind.RBRACE, Kind.LBRACE_DOLLAR: Kind.RBRACE,
}
_CLOSE = {Kind.RPAREN, Kind.RBRACKET, Kind.RBRACE}


def _synth(kind: Kind, like: Token) -> Token:
    return Token(kind, kind.value, like.span)


def _element_start(out: List[Token], end: int) -> int:
    """Index where the rules element ending at ``out[end]`` begins."""
    t = out[end]
    if t.kind is Kind.STAR:
        return _element_start(out, end - 1)
    if t.kind in _CLOSE:
        depth = 0
        for i in range(end, -1, -1):
            k = out[i].kind
            if k in _CLOSE:
                depth += 1
            elif k in _OPEN:
                depth -= 1
                if depth == 0:
                    return i
        raise RbgSyntaxError("unbalanced brackets before '^'", t.span)
    if t.kind is Kind.IDENT:
        if end > 0 and out[end - 1].kind is Kind.ARROW:
            return end - 1
        return end
    if t.kind is Kind.KEEPER_ARROW:
        return end
    raise RbgSyntaxError(f"'^' cannot follow {t.text!r}", t.span)


def _split_top_commas(tokens: List[Token]) -> List[List[Token]]:
    parts: List[List[Token]] = [[]]
    depth = 0
    for t in tokens:
        if t.kind in _OPEN:
            depth += 1
        elif t.kind in _CLOSE:
            depth -= 1
        if t.kind is Kind.COMMA and depth == 0:
            parts.append([])
        else:
            parts[-1].append(t)
    return parts


def _matching_close(tokens: List[Token], start: int) -> int:
    depth = 0
    for i in range(start, len(tokens)):
        k = tokens[i].kind
        if k in _OPEN:
            depth += 1
        elif k in _CLOSE:
            depth -= 1
            if depth == 0:
                return i
    raise RbgSyntaxError("unclosed bracket", tokens[start].span)


def _desugar_rules(tokens: List[Token]) -> List[Token]:
    out: List[Token] = []
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if t.kind is Kind.CARET:
            if i + 1 >= len(tokens) or tokens[i + 1].kind is not Kind.NAT:
                raise RbgSyntaxError("'^' must be followed by a natural number", t.span, ["nat"])
            n = int(tokens[i + 1].text)
            if n == 0:
                raise ZeroPower("power must be at least 1", tokens[i + 1].span)
            if not out:
                raise RbgSyntaxError("'^' needs a preceding element", t.span)
            start = _element_start(out, len(out) - 1)
            element = out[start:]
            out.extend(element * (n - 1))
            i += 2
            continue
        if t.kind in (Kind.LBRACKET, Kind.LBRACKET_DOLLAR):
            close = _matching_close(tokens, i)
            inner = _desugar_rules(tokens[i + 1:close])
            parts = _split_top_commas(inner)
            if len(parts) == 1:
                out.append(t)
                out.extend(inner)
                out.append(tokens[close])
            else:
                out.extend(_expand_comma_list(t, parts, tokens[close]))
            i = close + 1
            continue
        out.append(t)
        i += 1
    return out


def _expand_comma_list(opener: Token, parts, closer: Token) -> List[Token]:
    has_assign = [any(p.kind is Kind.ASSIGN for p in part) for part in parts]
    if opener.kind is Kind.LBRACKET_DOLLAR:
        if not all(has_assign):
            raise MixedCommaList("assignments and pieces cannot be mixed in one [ ]", opener.span)
        out: List[Token] = []
        for part in parts:
            out.append(_synth(Kind.LBRACKET_DOLLAR, opener))
            out.extend(part)
            out.append(closer)
        return out
    if any(has_assign) or any(len(p) != 1 or p[0].kind is not Kind.IDENT for p in parts):
        raise MixedCommaList("a comma list of offs must contain single piece names", opener.span)
    out = [_synth(Kind.LPAREN, opener)]
    for n, part in enumerate(parts):
        if n:
            out.append(_synth(Kind.PLUS, opener))
        out.append(opener)
        out.extend(part)
        out.append(closer)
    out.append(_synth(Kind.RPAREN, closer))
    return out


def desugar(stream) -> TokenStream:
    """Desugar the rules section of a description, or a bare rules fragment."""
    tokens = list(stream)
    source_name = getattr(stream, "source_name", "<string>")
    if not any(t.kind is Kind.HASH for t in tokens):
        return TokenStream(_desugar_rules(tokens), source_name)
    out: List[Token] = []
    i = 0
    while i < len(tokens):
        j = i + 1
        while j < len(tokens) and tokens[j].kind is not Kind.HASH:
            j += 1
        section = tokens[i:j]
        if len(section) >= 3 and section[1].kind is Kind.RULES:
            out.extend(section[:3])
            out.extend(_desugar_rules(section[3:]))
        else:
            out.extend(section)
        i = j
    return TokenStream(out, source_name)
