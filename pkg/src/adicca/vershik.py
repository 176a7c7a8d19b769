"""Adic dynamics on the orbit of the extremal paths.

Paths are :class:`~adicca.diagram.PathRep` values: finitely many explicit
labels followed by the minimal or maximal tail.  The successor map either
changes a label inside the explicit prefix or materializes more of the tail
until it finds an edge it can increment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, TextIO

from .diagram import Diagram, PathRep, Tail, canonical, pad, source_chain
from .errors import (
    ExtensionBoundExceeded,
    InconsistentPath,
    LabelOutOfRange,
    NotFocused,
    NotProperlyOrdered,
)

EXTENSION_BOUND = 64
MAX_ORBIT = 10**7


class Order(Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"
    INCOMPARABLE = "incomparable"


def minimal_path(d: Diagram) -> PathRep:
    for n in range(2, d.horizon + 1):
        if d.focus_vertex(n) is None:
            raise NotFocused(f"minimal edges of level {n} have different ranges")
    return PathRep((), Tail.MIN)


def maximal_path(d: Diagram) -> PathRep:
    if not d.has_unique_max():
        raise NotProperlyOrdered("maximal path is not unique")
    return PathRep((), Tail.MAX)


def _sources(d: Diagram, p: PathRep):
    try:
        return source_chain(d, p)
    except LabelOutOfRange as exc:
        raise InconsistentPath(str(exc)) from exc


def _tail_is_single_edged(d: Diagram, tail: Tail, start: int) -> bool:
    """True when every tail edge from level ``start`` up is the only edge of its source."""
    stop = max(start, d.periodic_start) + d.period
    return all(d.deg(n, d.tail_vertex(tail, n)) == 0 for n in range(start, stop + 1))


def successor(d: Diagram, p: PathRep, bound: int = EXTENSION_BOUND) -> PathRep:
    """The next path in the adic order; the maximal path wraps to the minimal one."""
    srcs = _sources(d, p)
    labels = list(p.labels)
    k = next((n for n in range(1, len(labels) + 1) if labels[n - 1] < d.deg(n, srcs[n - 1])), None)
    if k is None:
        start = len(labels) + 1
        if p.tail is Tail.MAX or _tail_is_single_edged(d, p.tail, start):
            return minimal_path(d)
        for n in range(start, start + bound):
            labels.append(0)
            if d.deg(n, d.min_vertex(n)) > 0:
                k = n
                break
        else:
            raise ExtensionBoundExceeded(f"no incrementable edge within {bound} levels above {start - 1}")
    labels[k - 1] += 1
    for j in range(k - 1):
        labels[j] = 0
    return PathRep(tuple(labels), p.tail)


def predecessor(d: Diagram, p: PathRep, bound: int = EXTENSION_BOUND) -> PathRep:
    """The previous path; the minimal path wraps to the maximal one."""
    labels = list(p.labels)
    k = next((n for n in range(1, len(labels) + 1) if labels[n - 1] > 0), None)
    if k is None:
        start = len(labels) + 1
        if p.tail is Tail.MIN or _tail_is_single_edged(d, p.tail, start):
            _sources(d, p)
            return maximal_path(d)
        for n in range(start, start + bound):
            x = d.tail_label(Tail.MAX, n)
            labels.append(x)
            if x > 0:
                k = n
                break
        else:
            raise ExtensionBoundExceeded(f"no decrementable edge within {bound} levels above {start - 1}")
    srcs = _sources(d, PathRep(tuple(labels), p.tail))
    labels[k - 1] -= 1
    a = d.word(k, srcs[k - 1])[labels[k - 1]] if k > 1 else None
    for j in range(k - 1, 0, -1):
        labels[j - 1] = d.deg(j, a)
        a = d.word(j, a)[-1]
    return PathRep(tuple(labels), p.tail)


def compare(d: Diagram, p: PathRep, q: PathRep) -> Order:
    """Order of two paths in the same tail class, else INCOMPARABLE."""
    if p.tail is not q.tail:
        return Order.INCOMPARABLE
    L = max(p.depth, q.depth)
    x, y = pad(d, p, L).labels, pad(d, q, L).labels
    for n in range(L, 0, -1):
        if x[n - 1] != y[n - 1]:
            return Order.LESS if x[n - 1] < y[n - 1] else Order.GREATER
    return Order.EQUAL


def same_path(d: Diagram, p: PathRep, q: PathRep) -> bool:
    return canonical(d, p) == canonical(d, q)


@dataclass
class OrbitLog:
    base: PathRep
    steps: int
    entries: list[PathRep] = field(default_factory=list)

    def to_jsonl(self, fh: TextIO) -> None:
        for e in self.entries:
            fh.write(json.dumps(path_to_json(e)) + "\n")


def orbit(d: Diagram, p: PathRep, n: int, max_steps: int = MAX_ORBIT) -> OrbitLog:
    """Log of ``|n|`` successor (n > 0) or predecessor (n < 0) steps from ``p``."""
    if abs(n) > max_steps:
        raise ValueError(f"|n| = {abs(n)} exceeds the configured maximum {max_steps}")
    move = successor if n >= 0 else predecessor
    entries = [p]
    for _ in range(abs(n)):
        entries.append(move(d, entries[-1]))
    return OrbitLog(p, n, entries)


def iterate(d: Diagram, p: PathRep, forward: bool = True) -> Iterator[PathRep]:
    """Endless stream ``p, V(p), V^2(p), ...`` (or predecessors)."""
    move = successor if forward else predecessor
    while True:
        yield p
        p = move(d, p)


def path_to_json(p: PathRep) -> dict:
    return {"labels": list(p.labels), "tail": p.tail.value}


def path_from_json(obj: dict) -> PathRep:
    return PathRep(tuple(int(x) for x in obj["labels"]), Tail(obj.get("tail", "min")))


def read_jsonl(lines: Iterable[str]) -> list[PathRep]:
    return [path_from_json(json.loads(line)) for line in lines if line.strip()]
