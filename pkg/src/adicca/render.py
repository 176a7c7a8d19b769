"""Text and PGM renderings of spacetime patches."""

from __future__ import annotations

from dataclasses import dataclass

from .spacetime import DiagramPatch, Symbol


@dataclass(frozen=True)
class RenderSpec:
    rows: tuple[int, int]
    cols: tuple[int, int]
    scale: int = 8

    @classmethod
    def for_patch(cls, p: DiagramPatch, rows=None, cols=None, scale: int = 8) -> "RenderSpec":
        rows = rows or (p.m0, p.m1)
        cols = cols or (0, p.width)
        if not (p.m0 <= rows[0] <= rows[1] <= p.m1):
            raise ValueError(f"row range {rows} outside the patch rows {p.m0}..{p.m1}")
        if not (cols[0] <= cols[1] <= p.width):
            raise ValueError(f"column range {cols} exceeds the patch width {p.width}")
        if scale < 1:
            raise ValueError("scale must be positive")
        return cls(tuple(rows), tuple(cols), scale)


def parse_range(text: str) -> tuple[int, int]:
    """``"-5..0"`` -> ``(-5, 0)``."""
    a, sep, b = text.partition("..")
    if not sep:
        raise ValueError(f"range {text!r} is not of the form A..B")
    lo, hi = int(a), int(b)
    if lo > hi:
        raise ValueError(f"empty range {text!r}")
    return lo, hi


def _cells(p: DiagramPatch, spec: RenderSpec) -> list[list[Symbol]]:
    (m0, m1), (c0, c1) = spec.rows, spec.cols
    # highest level on the left, as in the usual picture of a path
    return [[p.row(m)[j] for j in range(c1, c0 - 1, -1)] for m in range(m0, m1 + 1)]


def render_text(p: DiagramPatch, spec: RenderSpec) -> str:
    cells = _cells(p, spec)
    (m0, _), (c0, c1) = spec.rows, spec.cols
    width = max(len(str(s)) for r in cells for s in r)
    head = "m\\n".rjust(5) + " " + " ".join(str(j).rjust(width) for j in range(c1, c0 - 1, -1))
    lines = [head]
    for i, r in enumerate(cells):
        lines.append(str(m0 + i).rjust(5) + " " + " ".join(str(s).rjust(width) for s in r))
    return "\n".join(lines) + "\n"


def legend(symbols) -> dict[str, int]:
    """Gray level per symbol: clock is black, others spread evenly up to white."""
    syms = sorted({str(s) for s in symbols} - {"C"})
    out = {"C": 0}
    for i, s in enumerate(syms):
        out[s] = round(255 * (i + 1) / len(syms))
    return out


def render_pgm(p: DiagramPatch, spec: RenderSpec) -> tuple[bytes, dict[str, int]]:
    """Plain (P2) PGM image plus its legend."""
    cells = _cells(p, spec)
    lut = legend(s for r in cells for s in r)
    k = spec.scale
    h, w = len(cells) * k, len(cells[0]) * k
    lines = ["P2", f"{w} {h}", "255"]
    for r in cells:
        line = " ".join(" ".join([str(lut[str(s)])] * k) for s in r)
        lines.extend([line] * k)
    return ("\n".join(lines) + "\n").encode("ascii"), lut
