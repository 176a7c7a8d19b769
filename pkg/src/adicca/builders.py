"""Diagrams for proper substitutions, odometers and Toeplitz sequences.

Also home of :func:`oplus`, addition with carry on a product of cyclic
groups, which serves as the independent oracle for odometer diagrams.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from sympy import factorint

from .diagram import Diagram, DiagramSpec, PathRep, analyze, pad, validate
from .errors import (
    DigitOutOfRange,
    EmptyQuotients,
    IncompleteFill,
    NotFocused,
    NotPrimitive,
    NotProper,
    NotToeplitz,
    UnstabilizedWords,
    WidthBoundViolated,
)

INF = math.inf


# -- substitutions -----------------------------------------------------------
@dataclass(frozen=True)
class SubstitutionSpec:
    words: Mapping[str, tuple[str, ...]]

    @classmethod
    def of(cls, words: Mapping[str, Sequence[str]]) -> "SubstitutionSpec":
        return cls({a: tuple(w) for a, w in words.items()})

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted(self.words))

    def is_proper(self) -> bool:
        firsts = {w[0] for w in self.words.values()}
        lasts = {w[-1] for w in self.words.values()}
        return len(firsts) == 1 and len(lasts) == 1

    def primitivity_index(self) -> int | None:
        """Smallest k with every letter in every k-fold image, else None."""
        letters = set(self.words)
        n = len(letters)
        reach = {a: set(w) for a, w in self.words.items()}
        cur = dict(reach)
        for k in range(1, (n - 1) ** 2 + 2):
            if all(s == letters for s in cur.values()):
                return k
            cur = {a: set().union(*(reach[b] for b in s)) for a, s in cur.items()}
        return None


def from_substitution(s: SubstitutionSpec) -> DiagramSpec:
    """Stationary diagram of a proper primitive substitution."""
    if any(len(w) == 0 for w in s.words.values()):
        raise NotProper("substitution has an empty image")
    if not s.is_proper():
        raise NotProper("images do not share a first and a last letter")
    if s.primitivity_index() is None:
        raise NotPrimitive("some letter never reaches every other letter")
    spec = DiagramSpec.build(
        level1={a: 1 for a in s.alphabet},
        templates={"tau": dict(s.words)},
        cycle=["tau"],
        alphabet=s.alphabet,
    )
    report = analyze(validate(spec))
    assert report.primitive and report.focused, report
    return spec


# -- odometers ----------------------------------------------------------------
@dataclass(frozen=True)
class OdometerSpec:
    """Quotients q_1, q_2, ...: a finite prefix then a repeated cycle."""

    prefix: tuple[int, ...] = ()
    cycle: tuple[int, ...] = ()

    def __post_init__(self):
        for q in (*self.prefix, *self.cycle):
            if q < 2:
                raise ValueError(f"quotients must be >= 2, got {q}")

    def quotient(self, n: int) -> int:
        """q_n for n >= 1."""
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.cycle[(n - 1 - len(self.prefix)) % len(self.cycle)]

    def quotients(self, L: int) -> tuple[int, ...]:
        return tuple(self.quotient(n) for n in range(1, L + 1))


def multiplicities(o: OdometerSpec) -> dict[int, float]:
    if not o.cycle:
        raise EmptyQuotients("odometer needs a nonempty periodic part")
    mult: dict[int, float] = {}
    for q in o.cycle:
        for p in factorint(q):
            mult[p] = INF
    for q in o.prefix:
        for p, e in factorint(q).items():
            if mult.get(p) != INF:
                mult[p] = mult.get(p, 0) + e
    return dict(sorted(mult.items()))


def odometer_canonical(o: OdometerSpec) -> tuple[int, int, dict[int, float]]:
    """(N, M, multiplicities): the odometer is conjugate to Z(..., M, M, N)."""
    mult = multiplicities(o)
    N = math.prod(p**e for p, e in mult.items() if e != INF)
    M = math.prod(p for p, e in mult.items() if e == INF)
    return N, M, mult


def odometers_equivalent(o1: OdometerSpec, o2: OdometerSpec) -> bool:
    return multiplicities(o1) == multiplicities(o2)


def from_odometer(o: OdometerSpec) -> DiagramSpec:
    N, M, _ = odometer_canonical(o)
    return DiagramSpec.build(level1={"a": N}, templates={"T": {"a": "a" * M}}, cycle=["T"])


def canonical_quotients(N: int, M: int) -> OdometerSpec:
    """Quotient list read off the labels of :func:`from_odometer` paths.

    A single clock edge (N == 1) carries no digit and is skipped.
    """
    return OdometerSpec((N,) if N > 1 else (), (M,))


def path_digits(d: Diagram, p: PathRep, L: int) -> tuple[int, ...]:
    """Digits of an odometer-diagram path, least significant first."""
    skip = 1 if d.level1[d.vertices(1)[0]] == 1 else 0
    return pad(d, p, L + skip).labels[skip : L + skip]


def oplus(x: Sequence[int], y: Sequence[int], q, L: int) -> tuple[int, ...]:
    """Addition with carry of two digit sequences, truncated at depth ``L``.

    ``q`` is an :class:`OdometerSpec` or an explicit quotient sequence of
    length at least ``L``.  Digits are least significant first; missing
    digits count as zero.
    """
    qs = q.quotients(L) if isinstance(q, OdometerSpec) else tuple(q)[:L]
    if len(qs) < L:
        raise ValueError("quotient sequence shorter than the requested depth")
    out = []
    carry = 0
    for n in range(L):
        a = x[n] if n < len(x) else 0
        b = y[n] if n < len(y) else 0
        if not (0 <= a < qs[n] and 0 <= b < qs[n]):
            raise DigitOutOfRange(f"digit at position {n + 1} outside [0, {qs[n]})")
        carry, r = divmod(carry + a + b, qs[n])
        out.append(r)
    return tuple(out)


# -- Toeplitz -----------------------------------------------------------------
@dataclass(frozen=True)
class Stage:
    s: int
    fill: Mapping[int, str]


@dataclass(frozen=True)
class ToeplitzSpec:
    stages: tuple[Stage, ...]
    tail_ratio: int = 1

    @classmethod
    def of(cls, stages, tail_ratio: int = 1) -> "ToeplitzSpec":
        return cls(tuple(Stage(s, dict(f)) for s, f in stages), tail_ratio)

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(sorted({c for st in self.stages for c in st.fill.values()}))


@dataclass
class FillReport:
    window: str
    holes_per_stage: list[int]
    ratios: list[int]
    word_counts: list[int]
    stabilized: bool
    width: int
    focused: bool
    equal_path_number: bool
    notes: list[str] = field(default_factory=list)


def toeplitz_fill(t: ToeplitzSpec, lo: int, hi: int) -> dict[int, str | None]:
    """Run the staged periodic filling on positions ``lo <= i < hi``."""
    x: dict[int, str | None] = {i: None for i in range(lo, hi)}
    prev = None
    for k, st in enumerate(t.stages, 1):
        if prev is not None and st.s % prev != 0:
            raise NotToeplitz(f"stage {k}: period {st.s} is not a multiple of {prev}")
        if any(not 0 <= f < st.s for f in st.fill):
            raise NotToeplitz(f"stage {k}: fill positions must lie in [0, {st.s})")
        for i in range(lo, hi):
            r = i % st.s
            if r in st.fill:
                if x[i] is not None:
                    raise NotToeplitz(f"stage {k} refills position {i} (already periodic)")
                x[i] = st.fill[r]
        prev = st.s
    return x


def _holes(t: ToeplitzSpec, k: int) -> list[int]:
    s = t.stages[k - 1].s
    x = toeplitz_fill(ToeplitzSpec(t.stages[:k]), 0, s)
    return [i for i in range(s) if x[i] is None]


def from_toeplitz(t: ToeplitzSpec, horizon: int, K: int | None = None):
    """Diagram of the Toeplitz sequence built by the staged filling.

    Returns ``(spec, words, report)`` where ``words[k-1]`` is the set of
    aligned length-``s_k`` factors.  Beyond the last stage the diagram
    continues with single-vertex levels of ``tail_ratio`` edges.
    """
    if not t.stages:
        raise NotToeplitz("no stages")
    if not _holes(t, 1):
        raise NotToeplitz("stage 1 fills every position: the sequence is periodic")
    s_last = t.stages[-1].s
    H = max(horizon, 4 * s_last)
    H -= H % s_last
    x = toeplitz_fill(t, -H, H)
    missing = sorted(i for i in range(0, 2 * s_last) if x[i] is None)
    if missing:
        raise IncompleteFill(f"holes remain at positions {missing} (mod {2 * s_last})")

    holes = [len(_holes(t, k)) for k in range(1, len(t.stages) + 1)]
    periods = [st.s for st in t.stages]
    ratios = [b // a for a, b in zip(periods, periods[1:])]
    nA = len(t.alphabet)
    if K is not None:
        if any(r > K for r in ratios):
            raise WidthBoundViolated(f"period ratios {ratios} exceed K={K}")
        cap = math.log(K, nA) if nA > 1 else INF
        if any(h > cap + 1e-12 for h in holes):
            raise WidthBoundViolated(f"hole counts {holes} exceed log_{nA}({K})")

    def blocks(s, lo, hi):
        return {"".join(x[i] for i in range(j, j + s)) for j in range(lo, hi, s) if j + s <= hi}

    words = []
    stabilized = True
    for s in periods:
        inner = blocks(s, -H // 2 - ((-H // 2) % s), H // 2)
        outer = blocks(s, -H, H)
        if outer - inner:
            stabilized = False
        words.append(sorted(outer))
    if not stabilized:
        raise UnstabilizedWords("outer half of the window adds new words; raise the horizon")

    def split(w, s):
        return [w[i : i + s] for i in range(0, len(w), s)]

    templates = {}
    for k in range(1, len(periods)):
        templates[f"W{k + 1}"] = {w: split(w, periods[k - 1]) for w in words[k]}
    (top,) = words[-1]
    templates["Wtail"] = {top: [top] * t.tail_ratio}
    spec = DiagramSpec.build(
        level1={w: 1 for w in words[0]},
        templates=templates,
        prefix=[f"W{k + 1}" for k in range(1, len(periods))],
        cycle=["Wtail"],
    )
    rep = analyze(validate(spec))
    if not rep.focused:
        raise NotFocused("aligned words do not share a common first block")
    if K is not None and rep.width > K:
        raise WidthBoundViolated(f"diagram width {rep.width} exceeds K={K}")
    report = FillReport(
        window="".join(x[i] for i in range(0, 2 * s_last)),
        holes_per_stage=holes,
        ratios=ratios,
        word_counts=[len(w) for w in words],
        stabilized=stabilized,
        width=rep.width,
        focused=rep.focused,
        equal_path_number=rep.equal_path_number,
    )
    return spec, words, report
