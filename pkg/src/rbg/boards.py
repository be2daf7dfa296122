"""Board generators: ``rectangle``, ``hexagon`` and ``cuboid``.

Generated vertices are named ``v<col><row>`` (``v<col><row><layer>`` for
cuboids), 0-based, rows counted from the top. When any coordinate on the board
exceeds 9 the parts are joined with underscores instead (``v<col>_<row>``).
Omitted cells produce no vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EmptyBoard, InvalidHexShape, RaggedLayers, RaggedRows, RbgSyntaxError
from .lexer import Kind, Token

Grid = Sequence[Sequence[Optional[str]]]


@dataclass
class GeneratedBoard:
    vertices: List[Tuple[str, str]]          # (name, initial piece), first is the start
    edges: List[Tuple[str, str, str]]        # (from, label, to)
    labels: Tuple[str, ...] = ()

    def out_edges(self) -> Dict[str, List[Tuple[str, str]]]:
        out: Dict[str, List[Tuple[str, str]]] = {v: [] for v, _ in self.vertices}
        for a, label, b in self.edges:
            out[a].append((label, b))
        return out

    def to_ll(self) -> str:
        """Explicit node list in LL syntax."""
        out = self.out_edges()
        lines = []
        for v, piece in self.vertices:
            edges = ", ".join(f"{label}: {t}" for label, t in out[v])
            lines.append(f"{v}[{piece}]{{{edges}}}")
        return "\n".join(lines)


def _namer(*extents):
    wide = any(n > 10 for n in extents)

    def name(*coords):
        if wide:
            return "v" + "_".join(str(c) for c in coords)
        return "v" + "".join(str(c) for c in coords)

    return name


def _build(cells: Dict[tuple, Tuple[str, str]], order: List[tuple], neighbours, labels):
    vertices = [cells[c] for c in order]
    edges = []
    for c in order:
        name = cells[c][0]
        found = []
        for label, other in neighbours(c):
            if other in cells:
                found.append((label, cells[other][0]))
        for label, target in sorted(found):
            edges.append((name, label, target))
    return GeneratedBoard(vertices, edges, tuple(labels))


def generate_rectangle(up: str, down: str, left: str, right: str, rows: Grid) -> GeneratedBoard:
    if not rows or not any(p is not None for row in rows for p in row):
        raise EmptyBoard("rectangle board has no vertices")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise RaggedRows("all rectangle rows must have the same length")
    name = _namer(width, len(rows))
    cells, order = {}, []
    for y, row in enumerate(rows):
        for x, piece in enumerate(row):
            if piece is not None:
                cells[(x, y)] = (name(x, y), piece)
                order.append((x, y))

    def neighbours(c):
        x, y = c
        return [(up, (x, y - 1)), (down, (x, y + 1)), (left, (x - 1, y)), (right, (x + 1, y))]

    return _build(cells, order, neighbours, (up, down, left, right))


def generate_hexagon(nw: str, ne: str, e: str, se: str, sw: str, w: str, rows: Grid) -> GeneratedBoard:
    if not rows or not any(p is not None for row in rows for p in row):
        raise EmptyBoard("hexagon board has no vertices")
    lengths = [len(r) for r in rows]
    growing = True
    for a, b in zip(lengths, lengths[1:]):
        if growing and b == a + 1:
            continue
        if b == a - 1:
            growing = False
            continue
        raise InvalidHexShape(f"row lengths {lengths} do not form a hexagon")
    name = _namer(max(lengths), len(rows))
    cells, order = {}, []
    for y, row in enumerate(rows):
        for x, piece in enumerate(row):
            if piece is not None:
                cells[(x, y)] = (name(x, y), piece)
                order.append((x, y))

    def neighbours(c):
        x, y = c
        out = [(e, (x + 1, y)), (w, (x - 1, y))]
        if y > 0:
            # previous row shorter: up-left is (x-1); longer: (x)
            shift = -1 if lengths[y - 1] < lengths[y] else 0
            out += [(nw, (x + shift, y - 1)), (ne, (x + shift + 1, y - 1))]
        if y + 1 < len(rows):
            shift = -1 if lengths[y + 1] < lengths[y] else 0
            out += [(sw, (x + shift, y + 1)), (se, (x + shift + 1, y + 1))]
        return out

    return _build(cells, order, neighbours, (nw, ne, e, se, sw, w))


def generate_cuboid(up: str, down: str, left: str, right: str, front: str, back: str,
                    layers: Sequence[Grid]) -> GeneratedBoard:
    """The first layer is the back-most one; ``front`` moves towards later layers."""
    if not layers or not any(p is not None for g in layers for row in g for p in row):
        raise EmptyBoard("cuboid board has no vertices")
    height, width = len(layers[0]), len(layers[0][0]) if layers[0] else 0
    for g in layers:
        if len(g) != height or any(len(r) != width for r in g):
            raise RaggedLayers("all cuboid layers must be congruent rectangles")
    name = _namer(width, height, len(layers))
    cells, order = {}, []
    for z, g in enumerate(layers):
        for y, row in enumerate(g):
            for x, piece in enumerate(row):
                if piece is not None:
                    cells[(x, y, z)] = (name(x, y, z), piece)
                    order.append((x, y, z))

    def neighbours(c):
        x, y, z = c
        return [
            (up, (x, y - 1, z)), (down, (x, y + 1, z)),
            (left, (x - 1, y, z)), (right, (x + 1, y, z)),
            (front, (x, y, z + 1)), (back, (x, y, z - 1)),
        ]

    return _build(cells, order, neighbours, (up, down, left, right, front, back))


# ------------------------------------------------------------ token parsing

class _Reader:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def expect(self, kind):
        t = self.peek()
        if t is None or t.kind is not kind:
            span = (t or self.tokens[-1]).span
            raise RbgSyntaxError(
                f"unexpected {'end of board' if t is None else repr(t.text)}", span, [kind.value])
        self.i += 1
        return t


def _read_line(r: _Reader) -> List[Optional[str]]:
    r.expect(Kind.LBRACKET)
    cells: List[Optional[str]] = []
    current: Optional[str] = None
    while True:
        t = r.peek()
        if t is None:
            r.expect(Kind.RBRACKET)
        if t.kind is Kind.IDENT:
            if current is not None:
                raise RbgSyntaxError("expected ',' between pieces", t.span, [","])
            current = t.text
            r.i += 1
        elif t.kind is Kind.COMMA:
            cells.append(current)
            current = None
            r.i += 1
        elif t.kind is Kind.RBRACKET:
            cells.append(current)
            r.i += 1
            return cells
        else:
            raise RbgSyntaxError(f"unexpected {t.text!r} in board line", t.span, ["piece", ",", "]"])


def _read_grid(r: _Reader, closing: Kind) -> List[List[Optional[str]]]:
    rows = []
    while r.peek() is not None and r.peek().kind is Kind.LBRACKET:
        if r.i + 1 < len(r.tokens) and r.tokens[r.i + 1].kind is Kind.LBRACKET:
            break  # start of a cuboid layer
        rows.append(_read_line(r))
    if not rows:
        r.expect(Kind.LBRACKET)
    return rows


_GENERATORS = {Kind.RECTANGLE: 4, Kind.HEXAGON: 6, Kind.CUBOID: 6}


def is_generator(tokens: Sequence[Token]) -> bool:
    return bool(tokens) and tokens[0].kind in _GENERATORS


def generate_from_tokens(tokens: Sequence[Token]) -> GeneratedBoard:
    """Instantiate a generator call such as ``rectangle(up,down,left,right,[e,e][e,e])``."""
    r = _Reader(list(tokens))
    head = r.peek()
    nlabels = _GENERATORS[head.kind]
    r.i += 1
    r.expect(Kind.LPAREN)
    labels = []
    for _ in range(nlabels):
        labels.append(r.expect(Kind.IDENT).text)
        r.expect(Kind.COMMA)
    try:
        if head.kind is Kind.CUBOID:
            layers = []
            while r.peek() is not None and r.peek().kind is Kind.LBRACKET:
                r.expect(Kind.LBRACKET)
                layers.append(_read_grid(r, Kind.RBRACKET))
                r.expect(Kind.RBRACKET)
            board = generate_cuboid(*labels, layers)
        else:
            rows = _read_grid(r, Kind.RPAREN)
            gen = generate_rectangle if head.kind is Kind.RECTANGLE else generate_hexagon
            board = gen(*labels, rows)
    except (EmptyBoard, InvalidHexShape, RaggedRows, RaggedLayers) as exc:
        if exc.span is None:
            exc.span = head.span
        raise
    r.expect(Kind.RPAREN)
    if r.peek() is not None:
        raise RbgSyntaxError(f"unexpected {r.peek().text!r} after board generator", r.peek().span)
    return board
