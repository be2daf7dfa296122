"""Textual macro system of the high-level language.

Definitions are processed left to right. A macro body is expanded with the
macros visible where it was *defined*, so a name used before its definition
stays a plain identifier. ``~`` pastes neighbouring tokens after argument
substitution; the pasted text must lex as one token.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .errors import ArityMismatch, DuplicateMacro, InvalidPaste, RbgSyntaxError, RecursiveExpansionLimit
from .lexer import Kind, SECTION_KEYWORDS, Token, TokenStream, lex_single

DEFAULT_DEPTH_LIMIT = 64


@dataclass
class MacroDef:
    name: str
    params: Tuple[str, ...]
    has_parens: bool
    body: List[Token]
    scope: "Scope"
    token: Token

    @property
    def arity(self):
        return len(self.params) if self.has_parens else None


class Scope:
    """Macros visible at one point of the description (persistent snapshot)."""

    def __init__(self, plain=None, with_args=None):
        self.plain: Dict[str, MacroDef] = dict(plain or {})
        self.with_args: Dict[Tuple[str, int], MacroDef] = dict(with_args or {})

    def names_with_args(self):
        return {n for n, _ in self.with_args}

    def add(self, m: MacroDef) -> "Scope":
        if m.has_parens:
            if m.name in self.plain:
                raise DuplicateMacro(
                    f"macro {m.name!r} already defined without parameters", m.token.span)
            key = (m.name, len(m.params))
            if key in self.with_args:
                raise DuplicateMacro(
                    f"macro {m.name!r} with {len(m.params)} parameters already defined", m.token.span)
            new = Scope(self.plain, self.with_args)
            new.with_args[key] = m
        else:
            if m.name in self.plain or m.name in self.names_with_args():
                raise DuplicateMacro(f"macro {m.name!r} already defined", m.token.span)
            new = Scope(self.plain, self.with_args)
            new.plain[m.name] = m
        return new


def _split_args(tokens, start):
    """Tokens from ``start`` (just after '(') to the matching ')'.

    Returns (list of argument token lists, index after ')').
    """
    args: List[List[Token]] = [[]]
    depth = 0
    i = start
    while i < len(tokens):
        t = tokens[i]
        if t.kind is Kind.LPAREN:
            depth += 1
        elif t.kind is Kind.RPAREN:
            if depth == 0:
                return args, i + 1
            depth -= 1
        elif t.kind is Kind.SEMICOLON and depth == 0:
            args.append([])
            i += 1
            continue
        args[-1].append(t)
        i += 1
    raise RbgSyntaxError("unbalanced '(' in macro arguments", tokens[start - 1].span)


def paste(tokens: List[Token]) -> List[Token]:
    """Apply the ``~`` metaoperator: join ``a ~ b ~ c`` into one re-lexed token."""
    if not any(t.kind is Kind.TILDE for t in tokens):
        return list(tokens)
    out: List[Token] = []
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if t.kind is Kind.TILDE:
            if not out or i + 1 >= len(tokens) or tokens[i + 1].kind is Kind.TILDE:
                raise InvalidPaste("'~' needs a token on both sides", t.span)
            left = out.pop()
            right = tokens[i + 1]
            text = left.text + right.text
            tok = lex_single(text)
            if tok is None:
                raise InvalidPaste(f"{text!r} is not a valid token", t.span)
            out.append(Token(tok.kind, text, left.span))
            i += 2
        else:
            out.append(t)
            i += 1
    return out


class Expander:
    def __init__(self, depth_limit: int = DEFAULT_DEPTH_LIMIT):
        self.depth_limit = depth_limit

    def expand(self, tokens: List[Token], scope: Scope, depth: int = 0) -> List[Token]:
        if depth > self.depth_limit:
            raise RecursiveExpansionLimit(
                f"macro expansion deeper than {self.depth_limit}",
                tokens[0].span if tokens else None)
        out: List[Token] = []
        i = 0
        with_args = scope.names_with_args()
        while i < len(tokens):
            t = tokens[i]
            if t.kind is Kind.IDENT:
                if t.text in scope.plain:
                    out.extend(self.instantiate(scope.plain[t.text], [], depth))
                    i += 1
                    continue
                if (t.text in with_args and i + 1 < len(tokens)
                        and tokens[i + 1].kind is Kind.LPAREN):
                    raw_args, after = _split_args(tokens, i + 2)
                    m = scope.with_args.get((t.text, len(raw_args)))
                    if m is None:
                        arities = sorted(n for (name, n) in scope.with_args if name == t.text)
                        raise ArityMismatch(
                            f"macro {t.text!r} takes {' or '.join(map(str, arities))} "
                            f"arguments, got {len(raw_args)}", t.span)
                    args = [self.expand(a, scope, depth + 1) for a in raw_args]
                    out.extend(self.instantiate(m, args, depth))
                    i = after
                    continue
            out.append(t)
            i += 1
        return paste(out)

    def instantiate(self, m: MacroDef, args, depth) -> List[Token]:
        binding = dict(zip(m.params, args))
        substituted: List[Token] = []
        for t in m.body:
            if t.kind is Kind.IDENT and t.text in binding:
                substituted.extend(binding[t.text])
            else:
                substituted.append(t)
        return self.expand(substituted, m.scope, depth + 1)


def _parse_definition(tokens, i):
    """Parse ``# name [ ( p ; ... ) ] =`` starting at the '#'. Returns (name, params, has_parens, j)."""
    hash_tok = tokens[i]
    if i + 1 >= len(tokens):
        raise RbgSyntaxError("'#' must be followed by a name", hash_tok.span)
    name = tokens[i + 1]
    j = i + 2
    params: List[str] = []
    has_parens = False
    if name.kind in SECTION_KEYWORDS:
        pass
    elif name.kind is Kind.IDENT:
        if j < len(tokens) and tokens[j].kind is Kind.LPAREN:
            has_parens = True
            j += 1
            while True:
                if j >= len(tokens) or tokens[j].kind is not Kind.IDENT:
                    raise RbgSyntaxError("expected a macro parameter",
                                         tokens[min(j, len(tokens) - 1)].span, ["ident"])
                if tokens[j].text in params:
                    raise RbgSyntaxError(f"duplicate parameter {tokens[j].text!r}", tokens[j].span)
                params.append(tokens[j].text)
                j += 1
                if j < len(tokens) and tokens[j].kind is Kind.SEMICOLON:
                    j += 1
                    continue
                if j < len(tokens) and tokens[j].kind is Kind.RPAREN:
                    j += 1
                    break
                raise RbgSyntaxError("expected ';' or ')' in macro parameters",
                                     tokens[min(j, len(tokens) - 1)].span, [";", ")"])
    else:
        raise RbgSyntaxError(f"{name.text!r} cannot be a macro or section name", name.span)
    if j >= len(tokens) or tokens[j].kind is not Kind.ASSIGN:
        raise RbgSyntaxError("expected '='", tokens[min(j, len(tokens) - 1)].span, ["="])
    return name, tuple(params), has_parens, j + 1


def expand_macros(stream, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> TokenStream:
    """Consume macro definitions and expand every instantiation.

    Returns the section definitions only (``# name = ...`` for the five sections)
    in their original order. A stream with no ``#`` at all is treated as a bare
    fragment and expanded with an empty scope.
    """
    tokens = list(stream)
    source_name = getattr(stream, "source_name", "<string>")
    expander = Expander(depth_limit)
    scope = Scope()
    out: List[Token] = []
    i = 0
    # leading tokens before the first '#' (bare fragments)
    while i < len(tokens) and tokens[i].kind is not Kind.HASH:
        i += 1
    if i:
        out.extend(expander.expand(tokens[:i], scope))
    while i < len(tokens):
        name, params, has_parens, j = _parse_definition(tokens, i)
        k = j
        while k < len(tokens) and tokens[k].kind is not Kind.HASH:
            k += 1
        body = tokens[j:k]
        if name.kind in SECTION_KEYWORDS:
            out.extend(tokens[i:j])
            out.extend(expander.expand(body, scope))
        else:
            scope = scope.add(MacroDef(name.text, params, has_parens, body, scope, name))
        i = k
    return TokenStream(out, source_name)


def expand_with(definitions: str, use: str):
    """Convenience for tests: expand ``use`` after processing macro ``definitions``."""
    from .lexer import tokenize

    stream = expand_macros(tokenize(definitions + "\n#rules = " + use))
    return TokenStream(stream[3:])
