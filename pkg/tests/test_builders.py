import math

import pytest
from hypothesis import given, settings, strategies as st

from adicca.builders import (
    OdometerSpec, SubstitutionSpec, ToeplitzSpec, canonical_quotients, from_odometer,
    from_substitution, from_toeplitz, odometer_canonical, odometers_equivalent, oplus,
    path_digits, toeplitz_fill,
)
from adicca.diagram import PathRep, Tail, analyze, validate
from adicca.errors import (
    DigitOutOfRange, EmptyQuotients, IncompleteFill, NotPrimitive, NotProper, NotToeplitz,
    WidthBoundViolated,
)
from adicca.vershik import minimal_path, successor

from conftest import TOEPLITZ_STAGES


def to_int(digits, qs):
    return sum(x * math.prod(qs[:i]) for i, x in enumerate(digits))


def test_substitution_builder():
    spec = from_substitution(SubstitutionSpec.of({"a": "abb", "b": "ab"}))
    assert spec.cycle == ("tau",) and spec.level1 == {"a": 1, "b": 1}
    with pytest.raises(NotProper):
        from_substitution(SubstitutionSpec.of({"a": "ab", "b": "ba"}))
    with pytest.raises(NotPrimitive):
        from_substitution(SubstitutionSpec.of({"a": "aa", "b": "aba"}))


def test_primitivity_index():
    assert SubstitutionSpec.of({"a": "abb", "b": "ab"}).primitivity_index() == 1
    assert SubstitutionSpec.of({"a": "ab", "b": "a"}).primitivity_index() == 2


@pytest.mark.parametrize("prefix,cycle,N,M", [((2,), (3,), 2, 3), ((), (2, 3), 1, 6), ((4,), (5,), 4, 5), ((2, 3), (3,), 2, 3)])
def test_odometer_canonical(prefix, cycle, N, M):
    assert odometer_canonical(OdometerSpec(prefix, cycle))[:2] == (N, M)


def test_odometer_equivalence_and_errors():
    assert odometers_equivalent(OdometerSpec((), (6,)), OdometerSpec((), (2, 3)))
    assert not odometers_equivalent(OdometerSpec((2,), (3,)), OdometerSpec((), (3,)))
    with pytest.raises(EmptyQuotients):
        odometer_canonical(OdometerSpec((2,), ()))
    with pytest.raises(ValueError):
        OdometerSpec((), (1,))


def test_oplus_examples():
    assert oplus((1, 2), (1, 0), (2, 3), 2) == (0, 0)
    with pytest.raises(DigitOutOfRange):
        oplus((2,), (0,), (2,), 1)


@settings(max_examples=200)
@given(st.lists(st.integers(2, 5), min_size=1, max_size=6), st.data())
def test_oplus_is_integer_addition(qs, data):
    x = [data.draw(st.integers(0, q - 1)) for q in qs]
    y = [data.draw(st.integers(0, q - 1)) for q in qs]
    got = oplus(x, y, qs, len(qs))
    assert to_int(got, qs) == (to_int(x, qs) + to_int(y, qs)) % math.prod(qs)


@pytest.mark.parametrize("prefix,cycle", [((2,), (3,)), ((), (2,)), ((3,), (2, 2))])
def test_odometer_diagram_counts(prefix, cycle):
    o = OdometerSpec(prefix, cycle)
    d = validate(from_odometer(o))
    N, M, _ = odometer_canonical(o)
    q = canonical_quotients(N, M)
    p = minimal_path(d)
    x = (0,) * 6
    for _ in range(200):
        p = successor(d, p)
        x = oplus(x, (1,), q, 6)
        assert path_digits(d, p, 6) == x


def test_toeplitz_three_stage():
    spec, words, rep = from_toeplitz(ToeplitzSpec.of(TOEPLITZ_STAGES), 64, 4)
    assert words == [["aa", "ab"], ["abaa", "abab"], ["abaaabab"]]
    assert rep.width <= 4 and rep.focused and rep.equal_path_number
    d = validate(spec)
    assert analyze(d).properly_ordered
    assert rep.window == "abaaabab" * 2


def test_toeplitz_fill_is_periodic_extension():
    x = toeplitz_fill(ToeplitzSpec.of(TOEPLITZ_STAGES), -16, 16)
    assert all(x[i] == x[i + 8] for i in range(-16, 8))


def test_toeplitz_errors():
    with pytest.raises(NotToeplitz):
        from_toeplitz(ToeplitzSpec.of([(2, {0: "a", 1: "b"})]), 16)
    with pytest.raises(IncompleteFill, match="holes"):
        from_toeplitz(ToeplitzSpec.of([(2, {0: "a"}), (4, {1: "b"})]), 16)
    with pytest.raises(NotToeplitz):
        from_toeplitz(ToeplitzSpec.of([(2, {0: "a"}), (3, {1: "b"})]), 16)
    with pytest.raises(WidthBoundViolated):
        from_toeplitz(ToeplitzSpec.of(TOEPLITZ_STAGES), 64, 1)
