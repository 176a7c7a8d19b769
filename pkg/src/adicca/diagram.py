"""Ordered Bratteli diagrams of bounded width.

A diagram is described by level templates.  A template maps each vertex
``a`` of level ``n`` to an ordered word over the vertices of level ``n - 1``;
the ``k``-th letter of the word is the range of the edge labelled ``k`` out
of ``a``.  Level 1 is special: its edges all end at the root clock vertex and
are stored as counts only.

Levels ``n >= 2`` read their template from a schedule made of a finite prefix
followed by a cycle repeated forever, so every diagram here has finitely many
distinct templates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    BadLevels,
    CutsBreakPeriodicity,
    CutsNotMonotone,
    EmptySchedule,
    LabelOutOfRange,
    LevelMismatch,
    MaxTailUndefined,
    MinTailUndefined,
    ZeroClockEdges,
)

CLOCK = "⏰"


@dataclass(frozen=True)
class LevelTemplate:
    """Ordered edge description of one level: vertex -> word of ranges."""

    tid: str
    ranges: Mapping[str, tuple[str, ...]]

    def word(self, a: str) -> tuple[str, ...]:
        return self.ranges[a]

    def apply(self, word: Sequence[str]) -> tuple[str, ...]:
        """Substitute every letter of ``word`` by its image, concatenating."""
        out: list[str] = []
        for a in word:
            out.extend(self.ranges[a])
        return tuple(out)


@dataclass(frozen=True)
class DiagramSpec:
    alphabet: tuple[str, ...]
    level1: Mapping[str, int]
    templates: Mapping[str, LevelTemplate]
    prefix: tuple[str, ...] = ()
    cycle: tuple[str, ...] = ()

    @classmethod
    def build(cls, level1, templates, cycle, prefix=(), alphabet=None):
        """Convenience constructor from plain dicts.

        ``templates`` maps template id -> {vertex: word}; words may be strings
        (one character per vertex) or sequences of vertex names.
        """
        tmpl = {
            tid: LevelTemplate(tid, {a: tuple(w) for a, w in ranges.items()})
            for tid, ranges in templates.items()
        }
        if alphabet is None:
            letters = set(level1)
            for t in tmpl.values():
                letters.update(t.ranges)
                for w in t.ranges.values():
                    letters.update(w)
            alphabet = sorted(letters)
        return cls(
            alphabet=tuple(alphabet),
            level1=dict(level1),
            templates=tmpl,
            prefix=tuple(prefix),
            cycle=tuple(cycle),
        )


class Tail(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class PathRep:
    """Infinite path: explicit labels x_1..x_L, then the extremal tail.

    ``labels[0]`` is the level-1 (clock edge) label.
    """

    labels: tuple[int, ...] = ()
    tail: Tail = Tail.MIN

    @property
    def depth(self) -> int:
        return len(self.labels)


@dataclass
class PropertyReport:
    width: int
    focus: dict[int, str] | None
    primitive: bool
    primitive_span: int | None
    properly_ordered: bool
    equal_path_number: bool
    unique_min: bool = True
    unique_max: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def focused(self) -> bool:
        return self.focus is not None


class Diagram:
    """A validated :class:`DiagramSpec` with derived per-level structure.

    Levels are numbered from 1.  Levels ``>= periodic_start`` repeat with
    period ``period``; :meth:`canon` folds any level onto its representative.
    """

    def __init__(self, spec: DiagramSpec):
        self.spec = spec
        self.prefix = spec.prefix
        self.cycle = spec.cycle
        self.templates = spec.templates
        self.level1 = dict(spec.level1)

    # -- schedule --------------------------------------------------------
    @property
    def period(self) -> int:
        return len(self.cycle)

    @property
    def periodic_start(self) -> int:
        """First level whose template comes from the cycle."""
        return len(self.prefix) + 2

    @property
    def horizon(self) -> int:
        """Levels 1..horizon cover every distinct level (one full cycle)."""
        return self.periodic_start + self.period - 1

    def canon(self, n: int) -> int:
        P = self.periodic_start
        if n < P:
            return n
        return P + (n - P) % self.period

    def template_id(self, n: int) -> str | None:
        if n < 2:
            return None
        i = n - 2
        if i < len(self.prefix):
            return self.prefix[i]
        return self.cycle[(i - len(self.prefix)) % len(self.cycle)]

    def template(self, n: int) -> LevelTemplate:
        return self.templates[self.template_id(n)]

    def vertices(self, n: int) -> tuple[str, ...]:
        if n == 0:
            return (CLOCK,)
        if n == 1:
            return tuple(sorted(self.level1))
        return tuple(sorted(self.template(n).ranges))

    def word(self, n: int, a: str) -> tuple[str, ...]:
        """Ranges of the ordered edges leaving ``a`` at level ``n``."""
        if n == 1:
            return (CLOCK,) * self.level1[a]
        return self.template(n).ranges[a]

    def deg(self, n: int, a: str) -> int:
        """Maximal edge label out of ``a`` at level ``n`` (|E_n(a)| - 1)."""
        if n == 1:
            return self.level1[a] - 1
        return len(self.template(n).ranges[a]) - 1

    def edge_count(self, n: int) -> int:
        if n == 1:
            return sum(self.level1.values())
        return sum(len(w) for w in self.template(n).ranges.values())

    def incidence(self, n: int) -> np.ndarray:
        """Matrix of edge counts from V_n (rows) to V_{n-1} (columns)."""
        rows = self.vertices(n)
        cols = self.vertices(n - 1)
        idx = {b: j for j, b in enumerate(cols)}
        m = np.zeros((len(rows), len(cols)), dtype=object)
        for i, a in enumerate(rows):
            if n == 1:
                m[i, 0] = self.level1[a]
            else:
                for b in self.word(n, a):
                    m[i, idx[b]] += 1
        return m

    # -- extremal chains -------------------------------------------------
    def _extremal(self, which: int):
        """Vertices of the unique extremal path, or None when not unique.

        ``which`` is 0 for minimal (first letters) and -1 for maximal (last
        letters).  Returns ``(low, cyc)``: ``low[n]`` for levels
        ``1..periodic_start-1`` and ``cyc[i]`` for level
        ``periodic_start - 1 + i``, ``0 <= i < period``.
        """
        P, c = self.periodic_start, self.period

        def step(n, a):
            return self.word(n, a)[which]

        base = self.vertices(P - 1)
        # G maps V_{P-1+c} (== V_{P-1}) down one full cycle
        G = {}
        for a in base:
            v = a
            for n in range(P + c - 1, P - 1, -1):
                v = step(n, v)
            G[a] = v
        periodic = set()
        for a in base:
            seen = []
            v = a
            while v not in seen:
                seen.append(v)
                v = G[v]
            periodic.update(seen[seen.index(v):])
        if len(periodic) != 1:
            return None
        (fixed,) = periodic
        cyc = [None] * c
        cyc[0] = fixed
        v = fixed
        for i in range(c - 1, 0, -1):
            # level P-1+c maps down through levels P+c-1 .. P
            v = step(P + i, v)
            cyc[i] = v
        # sanity: one more step from level P lands on the fixed point again
        low = {P - 1: fixed}
        v = fixed
        for n in range(P - 1, 1, -1):
            v = step(n, v)
            low[n - 1] = v
        return low, cyc

    @cached_property
    def _min_chain(self):
        return self._extremal(0)

    @cached_property
    def _max_chain(self):
        return self._extremal(-1)

    def has_unique_min(self) -> bool:
        return self._min_chain is not None

    def has_unique_max(self) -> bool:
        return self._max_chain is not None

    def _chain_vertex(self, chain, n):
        low, cyc = chain
        P = self.periodic_start
        if n < P - 1:
            return low[n]
        return cyc[(n - (P - 1)) % self.period]

    def min_vertex(self, n: int) -> str:
        if self._min_chain is None:
            raise MinTailUndefined("diagram has no unique minimal path")
        return self._chain_vertex(self._min_chain, n)

    def max_vertex(self, n: int) -> str:
        if self._max_chain is None:
            raise MaxTailUndefined("diagram has no unique maximal path")
        return self._chain_vertex(self._max_chain, n)

    def tail_vertex(self, tail: Tail, n: int) -> str:
        return self.min_vertex(n) if tail is Tail.MIN else self.max_vertex(n)

    def tail_label(self, tail: Tail, n: int) -> int:
        """Label of the extremal path at level ``n``."""
        if tail is Tail.MIN:
            return 0
        return self.deg(n, self.max_vertex(n))

    def focus_vertex(self, n: int) -> str | None:
        """Common range of the minimal edges of level ``n`` (n >= 2)."""
        firsts = {w[0] for w in self.template(n).ranges.values()}
        return firsts.pop() if len(firsts) == 1 else None

    def alphabet_symbols(self) -> list[tuple]:
        """Raw (kind, vertex, template, label) tuples of the spacetime alphabet."""
        out = [("C",)]
        for a, cnt in sorted(self.level1.items()):
            out.extend(("K", a, i) for i in range(cnt))
        seen = set()
        for n in range(2, self.horizon + 1):
            tid = self.template_id(n)
            if tid in seen:
                continue
            seen.add(tid)
            for a, w in sorted(self.template(n).ranges.items()):
                out.extend(("E", a, tid, x) for x in range(len(w)))
        return out

    def __repr__(self):
        return f"Diagram(prefix={self.prefix}, cycle={self.cycle}, level1={self.level1})"


def validate(spec: DiagramSpec) -> Diagram:
    """Check level consistency and return the derived :class:`Diagram`."""
    if not spec.cycle:
        raise EmptySchedule("schedule cycle is empty")
    if not spec.level1:
        raise ZeroClockEdges("level 1 has no vertices")
    for a, cnt in spec.level1.items():
        if cnt < 1:
            raise ZeroClockEdges(f"vertex {a!r} has {cnt} clock edges")
    for tid in (*spec.prefix, *spec.cycle):
        if tid not in spec.templates:
            raise LevelMismatch(f"schedule names unknown template {tid!r}")
    for t in spec.templates.values():
        for a, w in t.ranges.items():
            if len(w) == 0:
                raise LevelMismatch(f"template {t.tid}: empty word for {a!r}")
    d = Diagram(spec)
    alpha = set(spec.alphabet)
    for n in range(1, d.horizon + d.period + 1):
        if not set(d.vertices(n)) <= alpha:
            raise LevelMismatch(f"level {n} uses vertices outside the alphabet")
        if n == 1:
            continue
        ranges = {b for w in d.template(n).ranges.values() for b in w}
        below = set(d.vertices(n - 1))
        if ranges != below:
            raise LevelMismatch(
                f"level {n} (template {d.template_id(n)}) ranges {sorted(ranges)} "
                f"!= level {n - 1} vertices {sorted(below)}"
            )
    return d


def _bool_primitive(G: np.ndarray, bound: int) -> int | None:
    A = (G > 0).astype(np.int64)
    P = A.copy()
    for k in range(1, bound + 1):
        if P.all():
            return k
        P = ((P @ A) > 0).astype(np.int64)
    return None


def analyze(d: Diagram) -> PropertyReport:
    """Width, focus, primitivity, proper order and equal path number."""
    H = d.horizon
    width = 0
    for n in range(1, H + 1):
        width = max(width, len(d.vertices(n)), d.edge_count(n))

    focus: dict[int, str] | None = {}
    for n in range(2, H + 1):
        f = d.focus_vertex(n)
        if f is None:
            focus = None
            break
        focus[n] = f

    P, c = d.periodic_start, d.period
    G = np.identity(len(d.vertices(P + c - 1)), dtype=object)
    for n in range(P + c - 1, P - 1, -1):
        G = G.dot(d.incidence(n))
    nv = G.shape[0]
    bound = max(width * width, (nv - 1) ** 2 + 1)
    k = _bool_primitive(G, bound)
    primitive = k is not None

    equal = all(
        len({d.deg(n, a) for a in d.vertices(n)}) == 1 for n in range(1, H + 1)
    )
    umin, umax = d.has_unique_min(), d.has_unique_max()
    return PropertyReport(
        width=width,
        focus=focus,
        primitive=primitive,
        primitive_span=None if k is None else k * c,
        properly_ordered=primitive and umin and umax,
        equal_path_number=equal,
        unique_min=umin,
        unique_max=umax,
    )


# -- paths -----------------------------------------------------------------
def source_chain(d: Diagram, p: PathRep) -> tuple[str, ...]:
    """Sources a_1..a_L of the explicit edges of ``p``."""
    L = p.depth
    if L == 0:
        return ()
    srcs = [None] * L
    a = d.tail_vertex(p.tail, L)
    for n in range(L, 0, -1):
        x = p.labels[n - 1]
        if not 0 <= x <= d.deg(n, a):
            raise LabelOutOfRange(f"label {x} at level {n} from {a!r} exceeds {d.deg(n, a)}")
        srcs[n - 1] = a
        if n > 1:
            a = d.word(n, a)[x]
    return tuple(srcs)


def pad(d: Diagram, p: PathRep, depth: int) -> PathRep:
    """Make the tail explicit up to ``depth`` levels (no-op if already deeper)."""
    if p.depth >= depth:
        return p
    extra = tuple(d.tail_label(p.tail, n) for n in range(p.depth + 1, depth + 1))
    return PathRep(p.labels + extra, p.tail)


def canonical(d: Diagram, p: PathRep) -> PathRep:
    """Drop trailing labels that merely repeat the tail."""
    labels = list(p.labels)
    while labels and labels[-1] == d.tail_label(p.tail, len(labels)):
        labels.pop()
    if p.tail is Tail.MAX:
        # where the maximal tail is also the minimal one, prefer MIN
        L = len(labels)
        for s in range(L + 1, max(L + 1, d.periodic_start) + d.period + 1):
            if _tails_meet(d, s):
                q = pad(d, PathRep(tuple(labels), Tail.MAX), s - 1)
                return canonical(d, PathRep(q.labels, Tail.MIN))
    return PathRep(tuple(labels), p.tail)


def _tails_meet(d: Diagram, start: int) -> bool:
    """True when the extremal tails use the same single edges from level ``start`` on."""
    stop = max(start, d.periodic_start) + d.period
    for n in range(start, stop + 1):
        v = d.tail_vertex(Tail.MIN, n)
        if v != d.tail_vertex(Tail.MAX, n) or d.deg(n, v) != 0:
            return False
    return True


def path_count(d: Diagram, src: tuple[str, int], dst: tuple[str, int]) -> int:
    """Number of paths from vertex ``src=(a, n)`` down to ``dst=(b, m)``."""
    (a, n), (b, m) = src, dst
    if not n > m >= 1:
        raise BadLevels(f"need n > m >= 1, got n={n}, m={m}")
    counts = {a: 1}
    for lvl in range(n, m, -1):
        nxt: dict[str, int] = {}
        for v, c in counts.items():
            for r in d.word(lvl, v):
                nxt[r] = nxt.get(r, 0) + c
        counts = nxt
    return counts.get(b, 0)


def composed_word(d: Diagram, a: str, n: int, m: int) -> tuple[str, ...]:
    """Ordered word of the paths from (a, n) down to level m (m >= 1)."""
    w: tuple[str, ...] = (a,)
    for lvl in range(n, m, -1):
        w = d.template(lvl).apply(w)
    return w


# -- telescoping -----------------------------------------------------------
def _expand_cuts(d: Diagram, cuts: Sequence[int], period: int | None, count: int):
    cuts = list(cuts)
    if len(cuts) < 2 or cuts[0] != 0 or any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise CutsNotMonotone(f"cuts must start at 0 and increase strictly: {cuts}")
    if period is None:
        period = cuts[-1] - cuts[-2]
    if period <= 0:
        raise CutsNotMonotone("cut period must be positive")
    out = list(cuts)
    while len(out) < count:
        out.append(out[-1] + period)
    return out, period


def telescope(d: Diagram, cuts: Sequence[int], period: int | None = None) -> DiagramSpec:
    """Telescope ``d`` at levels ``cuts`` (continued with step ``period``).

    ``cuts`` starts with 0.  Beyond the last listed cut, cuts continue every
    ``period`` levels (default: the last listed gap).  The continuation must
    stay aligned with the template cycle so the result is again eventually
    periodic.
    """
    cuts, period = _expand_cuts(d, cuts, period, 0)
    if period % d.period != 0 or cuts[-1] < d.periodic_start - 1:
        raise CutsBreakPeriodicity(
            f"cuts {cuts} with period {period} do not respect the schedule "
            f"(cycle length {d.period}, periodic from level {d.periodic_start})"
        )
    templates: dict[str, LevelTemplate] = {}

    def chunk(top: int, bottom: int) -> str:
        ids = [d.template_id(n) for n in range(top, bottom, -1)]
        tid = "*".join(ids)
        if tid not in templates:
            ranges = {a: composed_word(d, a, top, bottom) for a in d.vertices(top)}
            templates[tid] = LevelTemplate(tid, ranges)
        return tid

    n1 = cuts[1]
    if n1 == 1:
        level1 = dict(d.level1)
    else:
        level1 = {
            a: sum(d.level1[b] for b in composed_word(d, a, n1, 1))
            for a in d.vertices(n1)
        }
    prefix = tuple(chunk(cuts[k], cuts[k - 1]) for k in range(2, len(cuts)))
    cycle = (chunk(cuts[-1] + period, cuts[-1]),)
    alphabet = tuple(sorted(set(level1) | {a for t in templates.values() for a in t.ranges}))
    return DiagramSpec(alphabet, level1, templates, prefix, cycle)


def _heights(d: Diagram, top: int, floor: int) -> dict[tuple[int, str], int]:
    """Number of paths from (a, n) down to level ``floor`` for floor <= n <= top."""
    h: dict[tuple[int, str], int] = {}
    for a in d.vertices(floor):
        h[(floor, a)] = 1
    for n in range(floor + 1, top + 1):
        for a in d.vertices(n):
            if n == 1:
                h[(n, a)] = d.level1[a]
            else:
                h[(n, a)] = sum(h[(n - 1, b)] for b in d.word(n, a))
    return h


def telescope_recode(d: Diagram, cuts: Sequence[int], p: PathRep, period: int | None = None) -> PathRep:
    """Map a path of ``d`` to the corresponding path of ``telescope(d, cuts)``."""
    # enough cuts to cover the explicit labels
    full, period = _expand_cuts(d, cuts, period, 2)
    while full[-1] < p.depth:
        full.append(full[-1] + period)
    q = pad(d, p, full[-1])
    srcs = source_chain(d, q)
    new_labels = []
    for k in range(1, len(full)):
        top, floor = full[k], full[k - 1]
        h = _heights(d, top, floor)
        rank = 0
        for n in range(top, floor, -1):
            a, x = srcs[n - 1], q.labels[n - 1]
            rank += x if n == 1 else sum(h[(n - 1, b)] for b in d.word(n, a)[:x])
        new_labels.append(rank)
    return PathRep(tuple(new_labels), p.tail)
