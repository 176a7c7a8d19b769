"""Cellular automaton synthesis from harvested spacetime diagrams.

Cell ``k`` of a configuration holds a horizontal window of one spacetime
row: at time ``t`` it is row ``t - k``, columns ``k - lo .. k + hi``.  One
CA step moves every cell one row forward, so the configuration is a
diagonal ray through the spacetime diagram.  Cells with large ``k`` sit on
the far left of the line (they carry the high levels) and cells with
``k + hi <= 0`` are pure clock on the right.

The local rule is read off harvested diagrams: for every placement we record
the window one row later as a function of the three windows around it.
Neighbourhoods are listed left to right, i.e. ``(cell k+1, cell k, cell k-1)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .diagram import Diagram, PathRep, Tail, analyze, canonical
from .errors import (
    AmbiguousRule,
    DepthExceedsCore,
    InsufficientHarvest,
    Mismatch,
    NotFocused,
    NotProperlyOrdered,
    UnseenContext,
)
from .spacetime import CLOCK_SYMBOL, Row, Symbol, encode_row, patch
from .vershik import maximal_path, minimal_path, predecessor, successor

log = logging.getLogger(__name__)

Step = tuple[Symbol, ...]
CLOCK_STEP_CACHE: dict[int, Step] = {}

DEFAULT_CONFIGS = ((3, 1), (4, 1))


def window_bounds(w: int) -> tuple[int, int]:
    """Column offsets (lo, hi) of a width-``w`` window; extra width goes up."""
    lo = 1 if w >= 2 else 0
    return lo, w - 1 - lo


def clock_step(w: int) -> Step:
    return (CLOCK_SYMBOL,) * w


@dataclass
class RuleTable:
    w: int
    r: int
    table: dict
    functional: bool = True
    saturated: bool = False
    counterexamples: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def lo(self) -> int:
        return window_bounds(self.w)[0]

    @property
    def hi(self) -> int:
        return window_bounds(self.w)[1]

    def __len__(self):
        return len(self.table)

    def __call__(self, ctx) -> Step:
        try:
            return self.table[ctx]
        except KeyError:
            raise UnseenContext("neighbourhood absent from the rule table", context=ctx) from None


# -- harvesting ----------------------------------------------------------------
def _orbit_rows(d: Diagram, rows: int, width: int) -> dict[int, Row]:
    P = patch(d, minimal_path(d), -rows, rows, width)
    return {m: P.row(m) for m in range(-rows, rows + 1)}


def _windows(rowmap: dict[int, Row], m: int, lo: int, hi: int, kmin: int, kmax: int):
    row = rowmap[m]
    return {k: row.window(k - lo, k + hi) for k in range(kmin, kmax + 1)}


def harvest_transitions(d: Diagram, rows: int, width: int, w: int):
    """Yield ``(context, output)`` pairs from the minimal orbit, rows ``-rows..rows``."""
    lo, hi = window_bounds(w)
    rowmap = _orbit_rows(d, rows, width)
    kmin, kmax = -hi - 2, width - hi
    wins = {m: _windows(rowmap, m, lo, hi, kmin, kmax) for m in rowmap}
    for m in range(-rows + 1, rows):
        up, here, down = wins[m + 1], wins[m], wins[m - 1]
        for k in range(kmin + 1, kmax):
            # cell k+1 is one row behind, cell k-1 one row ahead
            yield (down[k + 1], here[k], up[k - 1]), up[k]


def enumerate_steps(d: Diagram, rows: int = 64, width: int = 12, w: int = 3) -> set[Step]:
    """All width-``w`` windows occurring in the harvested rows (clock ones included)."""
    lo, hi = window_bounds(w)
    rowmap = _orbit_rows(d, rows, width)
    out = {clock_step(w)}
    for row in rowmap.values():
        for k in range(-hi - 2, width - hi + 1):
            out.add(row.window(k - lo, k + hi))
    return out


def _harvest_table(d: Diagram, rows: int, width: int, w: int):
    table: dict = {}
    conflicts = []
    for ctx, out in harvest_transitions(d, rows, width, w):
        prev = table.setdefault(ctx, out)
        if prev != out and len(conflicts) < 5:
            conflicts.append((ctx, prev, out))
    return table, conflicts


def build_rule(
    d: Diagram,
    rows: int = 128,
    width: int = 16,
    configs: Sequence[tuple[int, int]] = DEFAULT_CONFIGS,
    max_doublings: int = 5,
) -> RuleTable:
    """Smallest functional rule among ``configs`` (pairs ``(w, r)``).

    The harvest is doubled until the table stops growing; a table that is
    still growing after ``max_doublings`` is returned with ``saturated=False``.
    """
    rep = analyze(d)
    if not rep.focused:
        raise NotFocused("rule synthesis needs a focused diagram")
    if not rep.properly_ordered:
        raise NotProperlyOrdered("rule synthesis needs a properly ordered diagram")
    failures = []
    for w, r in configs:
        if r != 1:
            raise ValueError("only radius-1 rules are supported")
        R, W = rows, width
        table, conflicts = _harvest_table(d, R, W, w)
        saturated = False
        for _ in range(max_doublings):
            if conflicts:
                break
            R2, W2 = 2 * R, W + 8
            table2, conflicts = _harvest_table(d, R2, W2, w)
            grew = len(table2) != len(table)
            table, R, W = table2, R2, W2
            if not grew:
                saturated = True
                break
        if conflicts:
            log.info("(w, r) = (%d, %d) is ambiguous: %d conflicts", w, r, len(conflicts))
            failures.append(((w, r), conflicts))
            continue
        if not table:
            raise InsufficientHarvest("no transitions harvested")
        rule = RuleTable(
            w, r, table, True, saturated,
            counterexamples=failures,
            provenance={"rows": R, "width": W, "tried": [c for c, _ in failures] + [(w, r)]},
        )
        log.info("functional rule at (w, r) = (%d, %d) with %d entries", w, r, len(table))
        return rule
    raise AmbiguousRule(
        f"no configured (w, r) in {list(configs)} gives a functional rule",
        counterexamples=failures,
    )


# -- configurations ------------------------------------------------------------
@dataclass(frozen=True)
class CAConfig:
    """Bi-infinite configuration: periodic left part, finite core, clock on the right.

    ``core[i]`` is cell ``kmax - i`` (listed left to right) with
    ``kmax = kmin + len(core) - 1``.  Cell ``kmax + 1 + j`` is
    ``left[j % len(left)]``; every cell below ``kmin`` is ``right``.
    """

    left: tuple[Step, ...]
    core: tuple[Step, ...]
    right: Step
    kmin: int

    @property
    def kmax(self) -> int:
        return self.kmin + len(self.core) - 1

    def cell(self, k: int) -> Step:
        if k < self.kmin:
            return self.right
        if k > self.kmax:
            return self.left[(k - self.kmax - 1) % len(self.left)]
        return self.core[self.kmax - k]


def _extremal_window(d: Diagram, tail: Tail, k: int, lo: int, hi: int) -> Step:
    row = encode_row(d, PathRep((), tail), k + hi)
    return row.window(k - lo, k + hi)


def make_x_init(d: Diagram, w: int = 3, extra: int = 0) -> CAConfig:
    """The diagonal ray through the spacetime diagram of the minimal path."""
    if not d.has_unique_max():
        raise NotProperlyOrdered("x_init needs a unique maximal path")
    lo, hi = window_bounds(w)
    kmin = 1 - hi
    c = d.period
    kstart = d.periodic_start + lo + c
    # row -k agrees with the maximal path above level D(k) = depth of its canonical form
    rows = {}
    p = minimal_path(d)
    k = 0
    K = None
    limit = 100_000
    while k < limit:
        k += 1
        p = predecessor(d, p)
        rows[k] = p
        depth = canonical(d, p).depth
        if k >= kstart and depth + lo + 1 < k - c:
            # depth grows no faster than the orbit length, so this stays true
            K = k + extra
            break
    if K is None:
        raise NotProperlyOrdered("maximal region never separated from the clock side")
    while k < K:
        k += 1
        p = predecessor(d, p)
        rows[k] = p
    q = minimal_path(d)
    for kk in range(0, kmin - 1, -1):
        rows[kk] = q
        q = successor(d, q)
    cells = {}
    for kk in range(kmin, K + 1):
        path = rows[kk]
        cells[kk] = encode_row(d, path, kk + hi).window(kk - lo, kk + hi)
    left = tuple(_extremal_window(d, Tail.MAX, K + 1 + j, lo, hi) for j in range(c))
    core = tuple(cells[kk] for kk in range(K, kmin - 1, -1))
    return CAConfig(left, core, clock_step(w), kmin)


class Simulator:
    """Synchronous in-place evolution of a :class:`CAConfig`.

    Only cells whose neighbourhood changed in the previous step are
    recomputed; unchanged neighbourhoods give unchanged outputs, so this is
    identical to updating every cell.
    """

    def __init__(self, cfg: CAConfig, rule: RuleTable):
        self.rule = rule
        self.left = cfg.left
        self.right = cfg.right
        self.kmin = cfg.kmin
        self.anchor = cfg.kmax
        self.vals = list(reversed(cfg.core))  # vals[k - kmin]
        self.time = 0
        self._check_fills()
        self.dirty = set(range(self.kmin - 1, self.kmax + 2))

    @property
    def kmax(self) -> int:
        return self.kmin + len(self.vals) - 1

    def _fill(self, k: int) -> Step:
        if k < self.kmin:
            return self.right
        return self.left[(k - self.anchor - 1) % len(self.left)]

    def get(self, k: int) -> Step:
        if self.kmin <= k <= self.kmax:
            return self.vals[k - self.kmin]
        return self._fill(k)

    def _check_fills(self):
        r = self.right
        if self.rule((r, r, r)) != r:
            raise Mismatch("clock region is not quiescent under the rule")
        n = len(self.left)
        for j in range(n):
            ctx = (self.left[(j + 1) % n], self.left[j], self.left[(j - 1) % n])
            if self.rule(ctx) != self.left[j]:
                raise Mismatch("left fill is not invariant under the rule")

    def step(self) -> None:
        changes = {}
        for k in self.dirty:
            ctx = (self.get(k + 1), self.get(k), self.get(k - 1))
            try:
                out = self.rule.table[ctx]
            except KeyError:
                raise UnseenContext(
                    f"unseen neighbourhood at cell {k}, time {self.time}", context=ctx, cell=k
                ) from None
            if out != self.get(k):
                changes[k] = out
        if changes:
            top = max(changes)
            while self.kmax < top:
                self.vals.append(self._fill(self.kmax + 1))
            if min(changes) < self.kmin:
                raise Mismatch("clock region changed under the rule")
        for k, v in changes.items():
            self.vals[k - self.kmin] = v
        self.dirty = {j for k in changes for j in (k - 1, k, k + 1)}
        self.time += 1

    def snapshot(self) -> CAConfig:
        return CAConfig(self.left[self._left_shift():] + self.left[: self._left_shift()],
                        tuple(reversed(self.vals)), self.right, self.kmin)

    def _left_shift(self) -> int:
        return (self.kmax - self.anchor) % len(self.left)


def simulate(cfg: CAConfig, rule: RuleTable, n: int) -> list[CAConfig]:
    """``[cfg, Phi(cfg), ..., Phi^n(cfg)]``."""
    sim = Simulator(cfg, rule)
    out = [cfg]
    for _ in range(n):
        sim.step()
        out.append(sim.snapshot())
    return out


def apply_rule(cells: Sequence[Step], rule: RuleTable) -> list[Step]:
    """One step on a finite segment; the two end cells are dropped."""
    return [rule((cells[i - 1], cells[i], cells[i + 1])) for i in range(1, len(cells) - 1)]


# -- decoding ------------------------------------------------------------------
def decode_symbols(source, rule: RuleTable, depth: int) -> tuple[Symbol, ...]:
    """Row through cell 0, columns ``1..depth``, recovered by running the rule.

    ``source`` is a :class:`CAConfig` or a :class:`Simulator`.  Column ``j`` is
    the centre of cell ``j`` after ``j`` steps, which depends only on cells
    ``0..2j`` of the input.
    """
    get = source.cell if isinstance(source, CAConfig) else source.get
    kmin = source.kmin
    if depth < 0:
        raise DepthExceedsCore("negative depth")
    lo, hi = rule.lo, rule.hi
    top = 2 * depth + 2
    # seg[i] = cell (kmin - 1 + i) as a left-to-right list reversed below
    ks = list(range(kmin - 1, top + 1))
    vals = {k: get(k) for k in ks}
    right = get(kmin - 2)
    out = []
    for s in range(1, depth + 1):
        new = {}
        for k in range(kmin - 1, top - s + 1):
            left_n = vals[k + 1]
            right_n = vals[k - 1] if k - 1 in vals else right
            new[k] = rule((left_n, vals[k], right_n))
        vals = new
        out.append(vals[s][lo])
    return tuple(out)


def decode(source, rule: RuleTable, depth: int) -> PathRep:
    """Path coded by a configuration, exact up to ``depth`` levels, minimal beyond."""
    syms = decode_symbols(source, rule, depth)
    return PathRep(tuple(s.label for s in syms), Tail.MIN)


# -- verification --------------------------------------------------------------
@dataclass
class ConjugacyReport:
    steps: int
    depth: int
    w: int
    rule_size: int
    mismatches: list = field(default_factory=list)
    distinct_decoded: int = 0
    distinct_adic: int = 0
    injective: bool = True

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.injective


def verify_conjugacy(
    d: Diagram,
    n_steps: int,
    depth: int,
    rule: RuleTable | None = None,
    cfg: CAConfig | None = None,
    oracle=None,
    raise_on_mismatch: bool = False,
) -> ConjugacyReport:
    """Compare decoded CA orbit of x_init with the adic orbit of x_min.

    ``oracle`` (optional) maps ``n`` to the expected truncated label tuple;
    by default the adic orbit itself is used.
    """
    if rule is None:
        rule = build_rule(d)
    if cfg is None:
        cfg = make_x_init(d, rule.w)
    sim = Simulator(cfg, rule)
    p = minimal_path(d)
    rep = ConjugacyReport(n_steps, depth, rule.w, len(rule))
    seen_dec: dict = {}
    seen_adic: dict = {}
    for n in range(n_steps + 1):
        got = decode_symbols(sim, rule, depth)
        want = encode_row(d, p, depth).cells
        if got != want:
            rep.mismatches.append((n, got, want))
        if oracle is not None:
            labels = tuple(s.label for s in got)
            if labels != tuple(oracle(n)):
                rep.mismatches.append((n, labels, tuple(oracle(n))))
        seen_dec.setdefault(got, set()).add(n)
        seen_adic.setdefault(want, set()).add(n)
        if rep.mismatches and raise_on_mismatch:
            raise Mismatch(f"decoded row differs from the adic orbit at n={rep.mismatches[0][0]}")
        if n < n_steps:
            sim.step()
            p = successor(d, p)
    rep.distinct_decoded = len(seen_dec)
    rep.distinct_adic = len(seen_adic)
    rep.injective = sorted(map(sorted, seen_dec.values())) == sorted(map(sorted, seen_adic.values()))
    return rep
