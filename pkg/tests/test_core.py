import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from quadzeros.errors import SchemaError
from quadzeros.fields import QQ, FunctionField, GFPoly, RatFunc
from quadzeros.linalg import all_minors, kernel_basis, rank

from conftest import rand_gf, rand_int_matrix


def test_kernel_examples():
    assert kernel_basis([[1, 0], [0, 1]], QQ) == []
    (v,) = kernel_basis([[1, 1]], QQ)
    assert v in {(1, -1), (-1, 1)}
    assert kernel_basis([[1, 1, 0], [0, 1, 1]], QQ) == [(1, -1, 1)]


def test_minor_examples():
    assert all_minors([[1, 0], [0, 1]], 2, QQ) == [1]
    assert all_minors([[1, 0], [0, 1], [1, 1]], 2, QQ) == [1, 1, -1]
    assert all_minors([[2, 4]], 1, QQ) == [2, 4]
    with pytest.raises(ValueError):
        all_minors([[1]], 2, QQ)


def test_rank_examples():
    assert rank([[0, 0], [0, 0]], QQ) == 0
    assert rank([[int(i == j) for j in range(4)] for i in range(4)], QQ) == 4
    assert rank([[1, 2], [2, 4]], QQ) == 1


def test_rank_matches_sympy_and_kernel(rng):
    for _ in range(100):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        M = rand_int_matrix(rng, r, c, 2)
        rk = rank(M, QQ)
        assert rk == sympy.Matrix(M).rank()
        ker = kernel_basis(M, QQ, c)
        assert rk == c - len(ker)
        for v in ker:
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in M)


def test_minors_alternate_under_row_swap(rng):
    for _ in range(50):
        M = rand_int_matrix(rng, 4, 3, 4)
        i, j = rng.sample(range(4), 2)
        S = [row[:] for row in M]
        S[i], S[j] = S[j], S[i]
        rows = list(combinations(range(4), 3))
        a, b = all_minors(M, 3, QQ), all_minors(S, 3, QQ)
        for n, rs in enumerate(rows):
            if i in rs and j in rs:
                assert a[n] == -b[n]


def test_ff_rank_over_f3(rng):
    K = FunctionField(3)
    for _ in range(30):
        M = [[K(rand_gf(rng, 3)) for _ in range(3)] for _ in range(3)]
        sm = sympy.Matrix([[sympy.sympify(str(a).replace("^", "**")) for a in r] for r in M])
        t = sympy.Symbol("t")
        d = sympy.Poly(sympy.expand(sm.det()), t, modulus=3)
        assert (rank(M, K) == 3) == (not d.is_zero)


def test_field_descriptors():
    with pytest.raises(SchemaError):
        FunctionField(2)
    with pytest.raises(SchemaError):
        FunctionField(9)
    assert QQ.parse("3/6") == Fraction(1, 2)
    K = FunctionField(5)
    assert K.parse("t^2") * K.parse("1/t") == K.parse("t")


def test_ratfunc_canonical_denominator_is_monic():
    K = FunctionField(3)
    x = K.parse("1/(2*t + 1)")
    assert x.den.lc == 1


_gf = st.lists(st.integers(0, 4), min_size=1, max_size=4)


@settings(max_examples=150, deadline=None)
@given(_gf, _gf, _gf, _gf)
def test_ff_field_axioms(a, b, c, d):
    p = 5
    x = RatFunc(GFPoly(a, p), GFPoly(d, p) if any(d) else None)
    y = RatFunc(GFPoly(b, p))
    z = RatFunc(GFPoly(c, p))
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    if x:
        assert x * (1 / x) == RatFunc(GFPoly([1], p))


@settings(max_examples=150, deadline=None)
@given(st.fractions(), st.fractions(), st.fractions())
def test_q_field_axioms(a, b, c):
    x, y, z = QQ(a), QQ(b), QQ(c)
    assert x * (y + z) == x * y + x * z
    if x:
        assert x * (1 / x) == 1
