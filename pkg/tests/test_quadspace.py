import random
from fractions import Fraction

import pytest

from quadzeros.bounds import bound_evaluator, check_bound
from quadzeros.constants import ConstantsTable
from quadzeros.errors import PreconditionError
from quadzeros.fields import QQ, FunctionField
from quadzeros.heights import Subspace
from quadzeros.quadspace import (QuadForm, QuadSpace, bilinear_eval, extend_to_max_isotropic,
                                 hyperbolic_pair, orth_complement_in, quadric_map, radical)

from conftest import projective_key, rand_gf

half = Fraction(1, 2)


def full(N, K=QQ):
    return Subspace.full(K, N)


def span(rows, K=QQ):
    return Subspace(rows, K)


def qs_of(M, V=None, K=QQ):
    F = QuadForm(M, K)
    return QuadSpace(V or full(len(M), K), F)


def diag(*d):
    return [[d[i] if i == j else 0 for j in range(len(d))] for i in range(len(d))]


XY = [[0, half], [half, 0]]
XY_ZW = [[0, half, 0, 0], [half, 0, 0, 0], [0, 0, 0, half], [0, 0, half, 0]]


def test_bilinear_examples():
    assert bilinear_eval(QuadForm(diag(1, 1)), [1, 0], [1, 0]) == 1
    assert bilinear_eval(QuadForm(XY), [1, 0], [0, 1]) == half
    assert QuadForm(diag(1, -1))([1, 1]) == 0
    with pytest.raises(ValueError):
        bilinear_eval(QuadForm(diag(1, 1)), [1, 0, 0], [1, 0])


def test_quadform_rejects_asymmetric_and_zero():
    with pytest.raises(ValueError):
        QuadForm([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        QuadForm([[0, 0], [0, 0]])


def test_radical_examples():
    assert radical(qs_of(diag(1, 1, 0))) == span([[0, 0, 1]])
    assert radical(qs_of([[0, 1], [1, 0]])).dim == 0
    V = span([[0, 1, 0], [0, 0, 1]])
    assert radical(qs_of(diag(1, 0, 0), V)) == V


def test_orth_complement_examples():
    assert orth_complement_in(span([[1, 0, 0]]), qs_of(diag(1, 1, 1))) == \
        span([[0, 1, 0], [0, 0, 1]])
    qs = qs_of(XY_ZW)
    assert orth_complement_in(span([[1, 0, 0, 0], [0, 1, 0, 0]]), qs) == \
        span([[0, 0, 1, 0], [0, 0, 0, 1]])
    qs = qs_of(diag(1, 1, 0))
    assert orth_complement_in(qs.radical, qs) == qs.V
    with pytest.raises(PreconditionError):
        orth_complement_in(span([[1, 0, 0]]), qs_of(diag(1, 1, 0), span([[0, 1, 0]])))


def test_hyperbolic_pair_examples():
    F = QuadForm(XY)
    x, y, _ = hyperbolic_pair(full(2), F)
    assert {projective_key(x, QQ), projective_key(y, QQ)} == {(1, 0), (0, 1)}
    assert F.bilinear(x, y) != 0
    F = QuadForm(diag(1, -1))
    x, y, _ = hyperbolic_pair(full(2), F)
    assert projective_key(x, QQ) == (1, 1) and projective_key(y, QQ) == (1, -1)
    with pytest.raises(PreconditionError):
        hyperbolic_pair(full(2), QuadForm(diag(1, 1)))


def test_witt_examples():
    w = qs_of([[0, half, 0], [half, 0, 0], [0, 0, 1]]).witt
    assert (w.lam, w.omega, len(w.anisotropic)) == (0, 1, 1)
    w = qs_of(XY).witt
    assert (w.lam, w.omega, len(w.anisotropic)) == (0, 1, 0)
    w = qs_of(diag(1, 1, 0)).witt
    assert (w.lam, w.omega, len(w.anisotropic)) == (1, 0, 2)
    assert w.search_cap >= 1


def test_extend_examples():
    assert extend_to_max_isotropic([1, 0], qs_of(XY)) == span([[1, 0]])
    assert extend_to_max_isotropic([1, 0, 0, 0], qs_of(XY_ZW)) == \
        span([[1, 0, 0, 0], [0, 0, 1, 0]])
    assert extend_to_max_isotropic([0, 0, 1], qs_of(diag(1, 1, 0))) == span([[0, 0, 1]])
    with pytest.raises(PreconditionError):
        extend_to_max_isotropic([1, 1], qs_of(diag(1, 1)))


def test_quadric_map_examples():
    qs = qs_of(XY)
    assert quadric_map([1, 0], qs, [0, 1]) == (0, -1)
    assert quadric_map([1, 0], qs, [1, 0]) == (0, 0)
    assert quadric_map([1, 0], qs, [1, 1]) == (0, -1)
    with pytest.raises(PreconditionError):
        quadric_map([1, 1], qs, [1, 0])


def _random_space(rng, K=QQ):
    N = rng.randint(2, 4)
    M = [[K.zero] * N for _ in range(N)]
    for i in range(N):
        for j in range(i, N):
            if rng.random() < 0.6:
                v = K(rng.randint(-3, 3)) if K is QQ else K(rand_gf(rng, K.q))
                M[i][j] = M[j][i] = v
    if not any(a for r in M for a in r):
        M[0][1] = M[1][0] = K.one
    V = full(N, K)
    if rng.random() < 0.5 and N > 2:
        while True:
            rows = [[rng.randint(-2, 2) for _ in range(N)] for _ in range(N - 1)]
            try:
                V = Subspace(rows, K)
                break
            except ValueError:
                pass
    return QuadSpace(V, QuadForm(M, K))


@pytest.mark.parametrize("K", [QQ, FunctionField(3)])
def test_structure_properties(K):
    rng = random.Random(str(K))
    table = ConstantsTable.for_field(K)
    for _ in range(25):
        qs = _random_space(rng, K)
        F, V = qs.F, qs.V
        R = qs.radical
        assert all(not F.bilinear(u, v) for u in R.basis for v in V.basis)
        w = qs.witt
        assert qs.L == w.lam + 2 * w.omega + len(w.anisotropic)
        blocks = [[x, y] for x, y in w.pairs] + [list(w.anisotropic)]
        for i, bi in enumerate(blocks):
            for bj in blocks[i + 1:]:
                assert all(not F.bilinear(a, b) for a in bi for b in bj)
        for x, y in w.pairs:
            assert not F(x) and not F(y) and F.bilinear(x, y)
        kind = "sing_height" if K is QQ else "fnct_rad_ht"
        if R.dim:
            bound = bound_evaluator(kind, {"r": qs.r, "HF": F.H, "HV": V.HH}, table)
            assert check_bound(R.HH, bound)
        if w.pairs:
            x0 = w.pairs[0][0]
            W = extend_to_max_isotropic(x0, qs)
            assert W.dim == qs.m and W.contains_subspace(R)
            for _ in range(5):
                t = [rng.randint(-3, 3) for _ in range(qs.N)]
                t = [sum((K(c) * b[j] for c, b in zip(t, V.basis)), K.zero)
                     for j in range(qs.N)]
                assert not F(quadric_map(x0, qs, t))
