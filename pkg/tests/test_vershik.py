import io as _io

import pytest
from hypothesis import given, settings, strategies as st

from adicca.builders import OdometerSpec, canonical_quotients, odometer_canonical, oplus, path_digits
from adicca.diagram import DiagramSpec, PathRep, Tail, canonical, pad, validate
from adicca.errors import InconsistentPath, NotFocused, NotProperlyOrdered
from adicca.vershik import (
    Order, compare, iterate, maximal_path, minimal_path, orbit, predecessor, read_jsonl,
    same_path, successor,
)

from conftest import ABB_WORDS


def enumerate_block(words, top, L):
    """All label tuples (level 1 first) of paths from ``top`` at level L+1... down."""
    out = []

    def go(v, level, acc):
        if level == 1:
            out.append((0, *acc))
            return
        for x, b in enumerate(words[v]):
            go(b, level - 1, (x, *acc))

    go(top, L, ())
    # adic order compares the highest level first
    return sorted(out, key=lambda t: t[::-1])


@st.composite
def abb_paths(draw, tail=Tail.MIN):
    L = draw(st.integers(1, 12))
    v = "a" if tail is Tail.MIN else "b"
    labels = []
    for _ in range(L - 1):
        w = ABB_WORDS[v]
        x = draw(st.integers(0, len(w) - 1))
        labels.append(x)
        v = w[x]
    return PathRep((0, *reversed(labels)), tail)


def test_extremal_paths(abb):
    assert minimal_path(abb) == PathRep((), Tail.MIN)
    assert maximal_path(abb) == PathRep((), Tail.MAX)


def test_abb_first_steps(abb):
    x = minimal_path(abb)
    assert canonical(abb, successor(abb, x)) == PathRep((0, 1), Tail.MIN)
    assert predecessor(abb, x) == maximal_path(abb)
    assert successor(abb, maximal_path(abb)) == x


@pytest.mark.parametrize("L", range(2, 9))
def test_successor_is_order_minimum(abb, L):
    block = enumerate_block(ABB_WORDS, "a", L)
    for p, q in zip(block, block[1:]):
        got = successor(abb, PathRep(p, Tail.MIN))
        assert pad(abb, got, L).labels == q
        assert compare(abb, PathRep(p, Tail.MIN), got) is Order.LESS
    # the largest path of the block leaves it
    top = successor(abb, PathRep(block[-1], Tail.MIN))
    assert canonical(abb, top).depth > L


@settings(max_examples=200, deadline=None)
@given(abb_paths())
def test_inverse_min_tail(abb, p):
    assert same_path(abb, predecessor(abb, successor(abb, p)), p)
    assert same_path(abb, successor(abb, predecessor(abb, p)), p)


@settings(max_examples=200, deadline=None)
@given(abb_paths(Tail.MAX))
def test_inverse_max_tail(abb, p):
    assert same_path(abb, predecessor(abb, successor(abb, p)), p)
    assert same_path(abb, successor(abb, predecessor(abb, p)), p)


def test_base2_example():
    d = validate(DiagramSpec.build({"a": 2}, {"T": {"a": "aa"}}, ["T"]))
    p = PathRep((1, 1, 0), Tail.MIN)
    q = successor(d, p)
    assert q == PathRep((0, 0, 1), Tail.MIN)
    assert predecessor(d, q) == p


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=10), st.integers(0, 1))
def test_odometer_successor_is_oplus_one(odo23, digits, first):
    N, M, _ = odometer_canonical(OdometerSpec((2,), (3,)))
    q = canonical_quotients(N, M)
    labels = (first, *digits)
    p = PathRep(labels, Tail.MIN)
    L = len(labels) + 1
    assert path_digits(odo23, successor(odo23, p), L) == oplus(labels, (1,), q, L)


def test_compare_and_tails(abb):
    a, b = PathRep((0, 1), Tail.MIN), PathRep((0, 2), Tail.MIN)
    assert compare(abb, a, b) is Order.LESS
    assert compare(abb, b, a) is Order.GREATER
    assert compare(abb, a, PathRep((0, 1, 0), Tail.MIN)) is Order.EQUAL
    assert compare(abb, a, PathRep((0, 1), Tail.MAX)) is Order.INCOMPARABLE


def test_orbit_log_roundtrip(abb):
    log = orbit(abb, minimal_path(abb), 25)
    assert len(log.entries) == 26
    buf = _io.StringIO()
    log.to_jsonl(buf)
    assert read_jsonl(buf.getvalue().splitlines()) == log.entries
    back = orbit(abb, log.entries[-1], -25)
    assert same_path(abb, back.entries[-1], minimal_path(abb))


def test_iterate_matches_orbit(abb):
    it = iterate(abb, minimal_path(abb))
    assert [next(it) for _ in range(10)] == orbit(abb, minimal_path(abb), 9).entries


def test_errors(abb):
    with pytest.raises(InconsistentPath):
        successor(abb, PathRep((0, 5), Tail.MIN))
    unfocused = validate(DiagramSpec.build({"a": 1, "b": 1}, {"T": {"a": "ab", "b": "ba"}}, ["T"]))
    with pytest.raises(NotFocused):
        minimal_path(unfocused)
    with pytest.raises(NotProperlyOrdered):
        maximal_path(unfocused)
