"""High-level to low-level compilation and the canonical LL printer."""

from __future__ import annotations

from typing import List

from . import boards
from .errors import RbgSyntaxError
from .lexer import Kind, SECTION_KEYWORDS, Token, TokenStream, tokenize
from .macros import DEFAULT_DEPTH_LIMIT, expand_macros
from .sugar import desugar

SECTION_ORDER = (Kind.PLAYERS, Kind.PIECES, Kind.VARIABLES, Kind.BOARD, Kind.RULES)


def _sections(tokens: List[Token]):
    """Map section kind -> (header tokens, body tokens); input must be macro-free."""
    out = {}
    i = 0
    while i < len(tokens):
        if tokens[i].kind is not Kind.HASH or i + 2 >= len(tokens) + 1:
            raise RbgSyntaxError(f"expected '#', got {tokens[i].text!r}", tokens[i].span, ["#"])
        if i + 1 >= len(tokens) or tokens[i + 1].kind not in SECTION_KEYWORDS:
            t = tokens[min(i + 1, len(tokens) - 1)]
            raise RbgSyntaxError(f"unknown section {t.text!r}", t.span)
        j = i + 3
        while j < len(tokens) and tokens[j].kind is not Kind.HASH:
            j += 1
        out.setdefault(tokens[i + 1].kind, []).append((tokens[i:i + 3], tokens[i + 3:j]))
        i = j
    return out


def instantiate_boards(stream) -> TokenStream:
    """Replace a generator call in ``#board`` with the explicit node list."""
    tokens = list(stream)
    out: List[Token] = []
    i = 0
    while i < len(tokens):
        j = i + 1
        while j < len(tokens) and tokens[j].kind is not Kind.HASH:
            j += 1
        section = tokens[i:j]
        if len(section) >= 3 and section[1].kind is Kind.BOARD and boards.is_generator(section[3:]):
            generated = boards.generate_from_tokens(section[3:])
            out.extend(section[:3])
            out.extend(tokenize(generated.to_ll()))
        else:
            out.extend(section)
        i = j
    return TokenStream(out, getattr(stream, "source_name", "<string>"))


def compile_hl_to_ll(stream, depth_limit: int = DEFAULT_DEPTH_LIMIT) -> TokenStream:
    """Macro expansion, then board generators, then sugar removal."""
    if isinstance(stream, str):
        stream = tokenize(stream)
    expanded = expand_macros(stream, depth_limit)
    return desugar(instantiate_boards(expanded))


# ------------------------------------------------------------------ printer

_NO_SPACE_AFTER = {
    Kind.LPAREN, Kind.LBRACKET, Kind.LBRACKET_DOLLAR, Kind.LBRACE,
    Kind.LBRACE_QUESTION, Kind.LBRACE_BANG, Kind.LBRACE_DOLLAR, Kind.ARROW,
}
_NO_SPACE_BEFORE = {Kind.RPAREN, Kind.RBRACKET, Kind.RBRACE, Kind.COMMA, Kind.STAR}


def _safe_adjacent(a: Token, b: Token) -> bool:
    try:
        toks = tokenize(a.text + b.text)
    except RbgSyntaxError:
        return False
    except Exception:
        return False
    return [t.text for t in toks] == [a.text, b.text]


def format_rules_tokens(tokens: List[Token]) -> str:
    parts: List[str] = []
    depth_arith = 0  # inside [$ ] or {$ }
    prev = None
    for t in tokens:
        if prev is not None:
            tight = (
                prev.kind in _NO_SPACE_AFTER or t.kind in _NO_SPACE_BEFORE or depth_arith > 0
                or (prev.kind is Kind.RBRACKET and t.kind in (Kind.LBRACKET, Kind.LBRACKET_DOLLAR))
            )
            if t.kind is Kind.PLUS and depth_arith == 0:
                tight = False
            if prev.kind is Kind.PLUS and depth_arith == 0:
                tight = False
            if prev.kind is Kind.COMMA and depth_arith == 0:
                tight = True
            if not tight or not _safe_adjacent(prev, t):
                parts.append(" ")
        parts.append(t.text)
        if t.kind in (Kind.LBRACKET_DOLLAR, Kind.LBRACE_DOLLAR):
            depth_arith += 1
        elif depth_arith and t.kind in (Kind.RBRACKET, Kind.RBRACE):
            depth_arith -= 1
        prev = t
    return "".join(parts)


def _format_decls(body: List[Token]) -> str:
    return "".join(", " if t.kind is Kind.COMMA else t.text for t in body)


def _format_board(body: List[Token]) -> List[str]:
    lines = []
    i = 0
    while i < len(body):
        j = i
        while j < len(body) and body[j].kind is not Kind.RBRACE:
            j += 1
        node = body[i:j + 1]
        text = "".join(t.text for t in node[:4])  # name[piece]
        edges = []
        k = 5
        while k + 2 < len(node):
            edges.append(f"{node[k].text}: {node[k + 2].text}")
            k += 4
        lines.append(f"  {text}{{{', '.join(edges)}}}")
        i = j + 1
    return lines


def format_ll(stream) -> str:
    """Canonical LL text: fixed section order, one node per line, rules indented."""
    tokens = list(stream)
    sections = _sections(tokens)
    lines = []
    for kind in SECTION_ORDER:
        for _, body in sections.get(kind, []):
            if kind is Kind.BOARD:
                lines.append("#board =")
                lines.extend(_format_board(body))
            elif kind is Kind.RULES:
                lines.append("#rules =")
                lines.append("  " + format_rules_tokens(body))
            else:
                decl = _format_decls(body)
                lines.append(f"#{kind.value} = {decl}".rstrip())
    return "\n".join(lines) + "\n"


def compile_source(text: str, source_name: str = "<string>") -> str:
    """HL text in, canonical LL text out."""
    return format_ll(compile_hl_to_ll(tokenize(text, source_name)))


def description_to_json(desc) -> dict:
    """Plain-data view of a parsed description (vertices, edges, indexed actions)."""
    from .parser import index_rules

    indexed = index_rules(desc.rules)
    board = desc.board
    return {
        "players": [{"name": p, "bound": b} for p, b in desc.players.items()],
        "pieces": list(desc.pieces),
        "variables": [{"name": v, "bound": b} for v, b in desc.variables.items()],
        "vertices": [{"name": v, "piece": p} for v, p in zip(board.vertices, board.initial_pieces)],
        "start": board.vertices[board.start_vertex],
        "directions": list(board.directions),
        "edges": [list(e) for e in board.edges()],
        "actions": [{"index": a.index, "kind": type(a.spec).__name__.lower(), "text": str(a.spec)}
                    for a in indexed.actions[1:]],
        "rules": format_rules_tokens(list(tokenize(_rules_text(desc)))),
    }


def _rules_text(desc) -> str:
    from .model import format_rules

    return format_rules(desc.rules)
