import pytest

from adicca.builders import OdometerSpec, SubstitutionSpec, ToeplitzSpec, from_odometer, from_substitution, from_toeplitz
from adicca.diagram import validate

ABB_WORDS = {"a": "abb", "b": "ab"}
TOEPLITZ_STAGES = [(2, {0: "a"}), (4, {1: "b"}), (8, {3: "a", 7: "b"})]


def abb_diagram():
    return validate(from_substitution(SubstitutionSpec.of(ABB_WORDS)))


def odo_diagram(prefix, cycle):
    return validate(from_odometer(OdometerSpec(tuple(prefix), tuple(cycle))))


def toeplitz_diagram(K=4):
    spec, _, _ = from_toeplitz(ToeplitzSpec.of(TOEPLITZ_STAGES), 64, K)
    return validate(spec)


@pytest.fixture(scope="session")
def abb():
    return abb_diagram()


@pytest.fixture(scope="session")
def odo23():
    return odo_diagram((2,), (3,))


@pytest.fixture(scope="session")
def odo2():
    return odo_diagram((), (2,))


@pytest.fixture(scope="session")
def toep():
    return toeplitz_diagram()
