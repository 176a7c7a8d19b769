"""Spacetime diagrams of the adic system and their 2x2 tile structure.

Row ``m`` of a spacetime diagram encodes ``V^m(x)`` as a sequence of
symbols indexed by columns: column ``n >= 2`` holds the level-``n`` edge,
column 1 the clock edge, and every column ``<= 0`` the clock itself.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .diagram import CLOCK, Diagram, PathRep, Tail, pad, source_chain
from .errors import InsufficientCoverage, MaxTailUndefined, ParseError, WidthExceedsTailKnowledge
from .vershik import predecessor, successor


class Symbol(NamedTuple):
    """One letter of the spacetime alphabet.

    ``kind`` is ``"C"`` (clock), ``"K"`` (clock edge) or ``"E"`` (edge).
    """

    kind: str
    vertex: str = ""
    template: str = ""
    label: int = 0

    def __str__(self):
        if self.kind == "C":
            return "C"
        if self.kind == "K":
            return f"{self.vertex}!{self.label}"
        return f"{self.vertex}@{self.template}#{self.label}"

    @property
    def source(self) -> str | None:
        return None if self.kind == "C" else self.vertex


CLOCK_SYMBOL = Symbol("C")


def clock_edge(a: str, i: int) -> Symbol:
    return Symbol("K", a, "", i)


def edge(a: str, tid: str, x: int) -> Symbol:
    return Symbol("E", a, tid, x)


def parse_symbol(text: str) -> Symbol:
    if text == "C":
        return CLOCK_SYMBOL
    if "@" in text:
        a, rest = text.split("@", 1)
        tid, sep, x = rest.rpartition("#")
        if sep and x.lstrip("-").isdigit():
            return edge(a, tid, int(x))
    elif "!" in text:
        a, _, x = text.rpartition("!")
        if x.isdigit():
            return clock_edge(a, int(x))
    raise ParseError(f"bad symbol {text!r}")


def symbol_range(d: Diagram, s: Symbol, column: int) -> str | None:
    """Range vertex of the edge a symbol stands for (None for the clock)."""
    if s.kind == "C":
        return None
    if s.kind == "K":
        return CLOCK
    return d.word(column, s.vertex)[s.label]


@dataclass(frozen=True)
class Row:
    """Columns ``1..width`` of one spacetime row; columns <= 0 are clock."""

    cells: tuple[Symbol, ...]

    @property
    def width(self) -> int:
        return len(self.cells)

    def __getitem__(self, j: int) -> Symbol:
        if j <= 0:
            return CLOCK_SYMBOL
        return self.cells[j - 1]

    def window(self, lo: int, hi: int) -> tuple[Symbol, ...]:
        return tuple(self[j] for j in range(lo, hi + 1))


def encode_row(d: Diagram, p: PathRep, width: int) -> Row:
    try:
        q = pad(d, p, width)
        srcs = source_chain(d, q)
    except MaxTailUndefined as exc:
        raise WidthExceedsTailKnowledge(str(exc)) from exc
    cells = []
    for n in range(1, width + 1):
        a, x = srcs[n - 1], q.labels[n - 1]
        cells.append(clock_edge(a, x) if n == 1 else edge(a, d.template_id(n), x))
    return Row(tuple(cells))


def decode_row(d: Diagram, row: Row, tail: Tail = Tail.MIN) -> PathRep:
    """Labels of a row read back as a path with the given tail."""
    return PathRep(tuple(s.label for s in row.cells), tail)


def row_consistent(d: Diagram, row: Row) -> bool:
    """Source at column j equals the range of the edge at column j + 1."""
    for j in range(1, row.width):
        if row[j].source != symbol_range(d, row[j + 1], j + 1):
            return False
    return True


@dataclass
class Grid:
    """Rectangular block of a spacetime diagram.

    ``rows[i][c]`` is the symbol at row ``m0 + i`` and column ``c0 + c``.
    """

    rows: list[list[Symbol]]
    m0: int
    c0: int

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    def at(self, m: int, j: int) -> Symbol:
        return self.rows[m - self.m0][j - self.c0]

    def copy(self) -> "Grid":
        return Grid([list(r) for r in self.rows], self.m0, self.c0)


@dataclass
class DiagramPatch:
    diagram: Diagram
    base: PathRep
    m0: int
    m1: int
    width: int
    paths: list[PathRep]
    rows: list[Row]

    def path(self, m: int) -> PathRep:
        return self.paths[m - self.m0]

    def row(self, m: int) -> Row:
        return self.rows[m - self.m0]

    def to_grid(self, colmin: int = -1) -> Grid:
        return Grid(
            [[r[j] for j in range(colmin, self.width + 1)] for r in self.rows],
            self.m0,
            colmin,
        )


def patch(d: Diagram, p: PathRep, m0: int, m1: int, width: int) -> DiagramPatch:
    """Rows ``m0..m1`` of the spacetime diagram through ``p`` (row 0)."""
    if m0 > m1:
        raise ValueError("empty row range")
    fwd = [p]
    for _ in range(max(m1, 0)):
        fwd.append(successor(d, fwd[-1]))
    back = []
    q = p
    for _ in range(max(-m0, 0)):
        q = predecessor(d, q)
        back.append(q)
    # index m -> path
    paths = [back[-m - 1] if m < 0 else fwd[m] for m in range(m0, m1 + 1)]
    rows = [encode_row(d, q, width) for q in paths]
    return DiagramPatch(d, p, m0, m1, width, paths, rows)


# -- tiles -------------------------------------------------------------------
Tile = tuple[tuple[Symbol, Symbol], tuple[Symbol, Symbol]]


@dataclass
class TileSet:
    tiles: frozenset
    saturated: bool = False

    def __len__(self):
        return len(self.tiles)

    def __contains__(self, t):
        return t in self.tiles


def _as_grid(x) -> Grid:
    return x.to_grid() if isinstance(x, DiagramPatch) else x


def grid_tiles(g: Grid) -> set:
    out = set()
    R = g.rows
    for i in range(len(R) - 1):
        lo, hi = R[i], R[i + 1]
        for c in range(len(lo) - 1):
            out.add(((lo[c], lo[c + 1]), (hi[c], hi[c + 1])))
    return out


def harvest_tiles(patches: Iterable) -> TileSet:
    tiles: set = set()
    for p in patches:
        tiles |= grid_tiles(_as_grid(p))
    return TileSet(frozenset(tiles))


def saturated_tiles(d: Diagram, base: PathRep, rows: int, width: int, max_rounds: int = 4) -> TileSet:
    """Harvest around ``base`` doubling the extent until nothing new appears."""
    prev = harvest_tiles([patch(d, base, -rows, rows, width)])
    for _ in range(max_rounds):
        rows, width = 2 * rows, 2 * width
        cur = harvest_tiles([patch(d, base, -rows, rows, width)])
        if cur.tiles == prev.tiles:
            return TileSet(cur.tiles, saturated=True)
        prev = cur
    return TileSet(prev.tiles, saturated=False)


@dataclass
class Admissibility:
    ok: bool
    violations: list[tuple[int, int, Tile]] = field(default_factory=list)
    boundary_ok: bool | None = None

    def __bool__(self):
        return self.ok


def admissible(x, tiles: TileSet) -> Admissibility:
    """Check every 2x2 block against ``tiles``; also the row-0 clock boundary."""
    g = _as_grid(x)
    bad = []
    R = g.rows
    for i in range(len(R) - 1):
        for c in range(len(R[i]) - 1):
            t = ((R[i][c], R[i][c + 1]), (R[i + 1][c], R[i + 1][c + 1]))
            if t not in tiles.tiles:
                bad.append((g.m0 + i, g.c0 + c, t))
    boundary = None
    if g.m0 <= 0 < g.m0 + len(R) and g.c0 <= 0 < g.c0 + len(R[0]) - 1:
        boundary = g.at(0, 0).kind == "C" and g.at(0, 1).kind == "K"
    return Admissibility(not bad, bad, boundary)


def mutate(g: Grid, alphabet: Sequence[Symbol], rng: random.Random) -> tuple[Grid, tuple[int, int]]:
    """Copy of ``g`` with one random cell replaced by a different symbol."""
    h = g.copy()
    i = rng.randrange(len(h.rows))
    c = rng.randrange(len(h.rows[i]))
    old = h.rows[i][c]
    choices = [s for s in alphabet if s != old]
    h.rows[i][c] = rng.choice(choices)
    return h, (h.m0 + i, h.c0 + c)


def alphabet(d: Diagram) -> list[Symbol]:
    out = []
    for t in d.alphabet_symbols():
        if t[0] == "C":
            out.append(CLOCK_SYMBOL)
        elif t[0] == "K":
            out.append(clock_edge(t[1], t[2]))
        else:
            out.append(edge(t[1], t[2], t[3]))
    return out


# -- determinism -------------------------------------------------------------
@dataclass(frozen=True)
class Shape:
    """Known (row, column) offsets and the offset they should determine."""

    known: tuple[tuple[int, int], ...]
    target: tuple[int, int]
    name: str = ""

    def span(self):
        pts = (*self.known, self.target)
        rs = [p[0] for p in pts]
        cs = [p[1] for p in pts]
        return min(rs), max(rs), min(cs), max(cs)


L_SHAPE = Shape(((0, -1), (0, 0), (1, -1)), (1, 0), "L")
WIDE_SHAPE = Shape(((0, -1), (0, 0), (0, 1), (1, -1)), (1, 0), "wide")


@dataclass
class DeterminismCertificate:
    shape: Shape
    functional: bool
    table: dict
    placements: int
    counterexample: tuple | None = None

    def replay(self, grids: Iterable) -> tuple[int, int, int]:
        """(checked, mismatches, unseen) when predicting held-out grids."""
        checked = mism = unseen = 0
        for ctx, tgt, _ in _placements(self.shape, [_as_grid(g) for g in grids]):
            checked += 1
            if ctx not in self.table:
                unseen += 1
            elif self.table[ctx] != tgt:
                mism += 1
        return checked, mism, unseen


def _placements(shape: Shape, grids: Sequence[Grid]):
    r0, r1, c0, c1 = shape.span()
    for g in grids:
        nr, nc = g.shape
        for i in range(-r0, nr - r1):
            for c in range(-c0, nc - c1):
                ctx = tuple(g.rows[i + dr][c + dc] for dr, dc in shape.known)
                tr, tc = shape.target
                yield ctx, g.rows[i + tr][c + tc], (g.m0 + i, g.c0 + c)


def determinism_check(patches: Iterable, shape: Shape) -> DeterminismCertificate:
    grids = [_as_grid(p) for p in patches]
    table: dict = {}
    where: dict = {}
    count = 0
    counter = None
    for ctx, tgt, pos in _placements(shape, grids):
        count += 1
        if ctx in table:
            if table[ctx] != tgt and counter is None:
                counter = (ctx, (where[ctx], table[ctx]), (pos, tgt))
        else:
            table[ctx] = tgt
            where[ctx] = pos
    if count == 0:
        raise InsufficientCoverage(f"no placement of shape {shape.name or shape}")
    return DeterminismCertificate(shape, counter is None, table, count, counter)
