import random
from fractions import Fraction

import pytest

from quadzeros.fields import QQ, FunctionField, GFPoly
from quadzeros.oracle import _Ring


def rand_fraction(rng: random.Random, bound: int = 50) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def rand_q_vector(rng: random.Random, N: int, bound: int = 50, nonzero: bool = True) -> list:
    while True:
        v = [rand_fraction(rng, bound) for _ in range(N)]
        if any(v) or not nonzero:
            return v


def rand_int_matrix(rng: random.Random, rows: int, cols: int, bound: int = 3) -> list:
    return [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)]


def rand_gf(rng: random.Random, p: int, degree: int = 1) -> GFPoly:
    return GFPoly([rng.randrange(p) for _ in range(degree + 1)], p)


def oracle_ring(field) -> _Ring:
    return _Ring(field.descriptor())


def as_text(v, field) -> list[str]:
    return [field.format(field(a)) for a in v]


def projective_key(v, field) -> tuple:
    """Primitive ring representative normalized up to units."""
    R = oracle_ring(field)
    y = R.primitive(R.clear([R.parse(s) for s in as_text(v, field)]))
    if R.p is None:
        first = next(a for a in y if a)
        return tuple(a if first > 0 else -a for a in y)
    first = next(a for a in y if a)
    inv = pow(first[-1], -1, R.p)
    return tuple(tuple((c * inv) % R.p for c in a) for a in y)


@pytest.fixture
def rng():
    return random.Random(20261015)


@pytest.fixture(scope="session")
def F3():
    return FunctionField(3)


@pytest.fixture(scope="session")
def QQf():
    return QQ
