import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quadzeros.errors import PreconditionError
from quadzeros.fields import QQ, FunctionField
from quadzeros.heights import Height, height_h, poly_height
from quadzeros.polyalg import (MonomialOrder, MultiPoly, nonvanishing_point, reduce_by_single,
                               restrict_to_basis)

import suites

P = MultiPoly.parse


def test_reduce_examples():
    order = MonomialOrder.lex(3)
    P2 = P("X1*X2 - X3^2", 3)
    assert reduce_by_single(P("X1*X2", 3), P2, order) == (P("X3^2", 3), P("1", 3))
    assert reduce_by_single(P("X3", 3), P2, order) == (P("X3", 3), MultiPoly.zero(3))
    r, q = reduce_by_single(P("X1^2*X2^2", 2), P("X1*X2", 2), MonomialOrder.lex(2))
    assert not r and q == P("X1*X2", 2)
    with pytest.raises(ValueError):
        reduce_by_single(P("X1", 1), MultiPoly.zero(1), MonomialOrder.lex(1))


def test_reduction_suite_small():
    assert suites.reduction_suite(80, seed=21)[1] == []


def test_reduction_preserves_values_on_zero_set(rng):
    # P1 and P1' agree wherever P2 vanishes
    P2 = P("X1*X2 - X3^2", 3)
    for _ in range(40):
        P1 = suites.rand_poly(rng, 3, 4, 4)
        r, _ = reduce_by_single(P1, P2, MonomialOrder.lex(3))
        a, b = rng.randint(-5, 5), rng.randint(1, 5)
        z = (Fraction(a * a, b), b, a)  # on X1 X2 = X3^2
        assert P1(z) == r(z)


def test_lex_leading_monomial_contains_product(rng):
    for _ in range(50):
        N = rng.randint(3, 5)
        Q1 = suites.rand_poly(rng, N, 2, 1, homogeneous=True)
        Q1 = MultiPoly({e: c for e, c in Q1.terms.items() if e[0] == e[1] == 0}, N, QQ)
        Q2 = MultiPoly({e: c for e, c in suites.rand_poly(rng, N, 3, 2, homogeneous=True)
                        .terms.items() if e[0] == e[1] == 0}, N, QQ)
        X1, X2 = MultiPoly.var(0, N), MultiPoly.var(1, N)
        Q = X1 * X2 * (Q1 + rng.choice([1, 2, -3])) + Q2
        lm = MonomialOrder.lex(N).leading(Q)
        assert lm[0] >= 1 and lm[1] >= 1


def test_restrict_examples():
    Q = P("X1^2 - 3*X1*X2", 2)
    assert restrict_to_basis(Q, [[1, 0], [0, 1]]) == Q
    assert restrict_to_basis(P("X1 + X2", 2), [[1, 2]]) == P("3*X1", 1)
    assert not restrict_to_basis(P("X1^2 - X2^2", 2), [[1, 1]])
    with pytest.raises(PreconditionError):
        restrict_to_basis(Q, [[1, 1], [2, 2]])


def test_restrict_height_bound(rng):
    for _ in range(60):
        N = rng.randint(2, 4)
        L = rng.randint(1, N)
        Pn = suites.rand_poly(rng, N, 3, 3, homogeneous=True)
        A = [[rng.randint(-3, 3) for _ in range(N)] for _ in range(L)]
        try:
            PA = restrict_to_basis(Pn, A)
        except PreconditionError:
            continue
        if not PA:
            continue
        D = Pn.degree
        assert PA.degree == D
        prod = Height(sq=1)
        for x in A:
            prod = prod * height_h(x)
        rhs = Height(sq=L ** (2 * D)) * poly_height(Pn)[0] * prod ** D
        assert poly_height(PA)[0] <= rhs


def test_nonvanishing_examples():
    z, cert = nonvanishing_point(P("X1", 1))
    assert z == (1,) and cert["h"] == 1 and cert["pass"]
    z, cert = nonvanishing_point(P("X1^2 + X2^2", 2))
    assert z == (0, 1) or z == (1, 0)
    Pc = P("X1*X2*(X1 - X2)", 2)
    z, cert = nonvanishing_point(Pc, 3)
    # a point of h = 1 already works, which is below A_Q(3) = 3 sqrt 2
    assert Pc(z) != 0 and cert["h"] == 1 and cert["pass"]
    with pytest.raises(PreconditionError):
        nonvanishing_point(MultiPoly.zero(2))


def test_nonvanishing_over_f3():
    K = FunctionField(3)
    # vanishes on every point of F_3^2, so the search must climb to degree 1
    Pc = MultiPoly.parse("X1^3*X2 - X1*X2^3", 2, K)
    z, cert = nonvanishing_point(Pc)
    assert Pc(z) != 0 and cert["pass"]


def test_evaluate_examples():
    assert P("X1*X2", 2).evaluate([2, 3]) == 6
    assert P("X1^2 - X2^2", 2).evaluate([1, 1]) == 0
    assert P("1/2*X1^3", 1).evaluate([2]) == 4


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_json_roundtrip(seed):
    r = random.Random(seed)
    Pn = suites.rand_poly(r, 3, 4, 3)
    assert MultiPoly.from_json(Pn.to_json(), 3, QQ) == Pn
