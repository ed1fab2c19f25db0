"""Randomized property suites shared by the module tests and the acceptance run.

Each suite returns ``(checked, failures)`` where ``failures`` is a list of
short descriptions.  Module tests call them with small counts; the
acceptance run uses the full counts.
"""

from __future__ import annotations

import random
from fractions import Fraction

from quadzeros.fields import QQ, FunctionField
from quadzeros.heights import (
    Height,
    Subspace,
    abs_at,
    height_by_places,
    height_H,
    height_h,
    height_HH,
    places,
    subspace_height_from_equations,
)
from quadzeros.linalg import matmul, rank
from quadzeros.oracle import _Ring
from quadzeros.polyalg import MonomialOrder, MultiPoly, _divides, reduce_by_single

from conftest import rand_fraction, rand_q_vector

ORACLE_Q = _Ring({"kind": "Q"})


def rand_subspace(rng: random.Random, N: int, L: int, bound: int = 50) -> Subspace:
    while True:
        rows = [rand_q_vector(rng, N, bound) for _ in range(L)]
        if rank(rows, QQ) == L:
            return Subspace(rows, QQ, N)


def _scaled_basis(rng: random.Random, V: Subspace) -> list:
    """Another basis of V: random invertible combination of the given one."""
    L = V.dim
    while True:
        T = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(L)] for _ in range(L)]
        if rank(T, QQ) == L:
            return matmul(T, [list(v) for v in V.basis], QQ.zero)


def height_axioms(count: int, seed: int = 1) -> tuple[int, list]:
    rng = random.Random(seed)
    fails: list = []
    for n in range(count):
        N = rng.randint(1, 6)
        x = rand_q_vector(rng, N)
        H, HH, h = height_H(x), height_HH(x), height_h(x)
        # independent evaluation
        if H.to_json() != ORACLE_Q.H(x) or HH.to_json() != ORACLE_Q.HH(x) \
                or h.to_json() != ORACLE_Q.h(x):
            fails.append(f"oracle mismatch {x}")
        if height_by_places(x) != H:
            fails.append(f"place-by-place height differs {x}")
        c = rand_fraction(rng)
        while not c:
            c = rand_fraction(rng)
        cx = [c * a for a in x]
        if height_H(cx) != H or height_HH(cx) != HH:
            fails.append(f"projectivity {x} * {c}")
        if not (H.sq <= HH.sq <= N * H.sq):
            fails.append(f"sqrt inequality {x}")
        if h < H:
            fails.append(f"h < H at {x}")
        # product formula for a nonzero scalar
        a = next(a for a in x if a)
        prod = Fraction(1)
        for v in places([a], QQ):
            prod *= abs_at(a, v, QQ)
        if prod != 1:
            fails.append(f"product formula at {a}")
        # subspaces
        if N >= 2:
            L = rng.randint(1, N - 1)
            V = rand_subspace(rng, N, L)
            ref = ORACLE_Q.subspace_heights([list(v) for v in V.basis])
            if (V.H.to_json(), V.HH.to_json()) != ref:
                fails.append(f"subspace oracle mismatch {V.basis}")
            W = Subspace(_scaled_basis(rng, V), QQ, N)
            if (W.H, W.HH) != (V.H, V.HH):
                fails.append(f"basis invariance {V.basis}")
            if subspace_height_from_equations(V.equations, QQ, N) != (V.H, V.HH):
                fails.append(f"duality {V.basis}")
    return count, fails


def _ok_sq(lhs: Height, rhs_sq) -> bool:
    return lhs.sq <= rhs_sq


def _prod_sq(hs) -> int:
    out = 1
    for h in hs:
        out *= h.sq
    return out


def _lemma_vectors(rng, N, k, bound=9):
    return [rand_q_vector(rng, N, bound) for _ in range(k)]


def sum_height_lemma(count: int, seed: int = 2) -> tuple[int, list]:
    rng = random.Random(seed)
    fails = []
    for _ in range(count):
        N, L = rng.randint(1, 5), rng.randint(1, 4)
        xs = _lemma_vectors(rng, N, L)
        xi = [rand_fraction(rng, 9) for _ in range(L)]
        s = [sum((c * x[k] for c, x in zip(xi, xs)), Fraction(0)) for k in range(N)]
        lhs = height_h(s)
        if height_H(s) > lhs:
            fails.append("H > h for a combination")
        rhs = L * L * height_h(xi).sq * _prod_sq(height_h(x) for x in xs)
        if not _ok_sq(lhs, rhs):
            fails.append(f"sum_height {xi} {xs}")
    return count, fails


def spanning_lemma(count: int, seed: int = 3) -> tuple[int, list]:
    rng = random.Random(seed)
    fails = []
    for _ in range(count):
        N = rng.randint(2, 5)
        Us = [rand_subspace(rng, N, rng.randint(1, N - 1), 9) for _ in range(rng.randint(0, 2))]
        xs = _lemma_vectors(rng, N, rng.randint(0 if Us else 1, 2))
        V = Subspace.spanned_by([v for U in Us for v in U.basis] + xs, QQ, N)
        m = len(xs)
        rhs = N ** m * _prod_sq(U.HH for U in Us) * _prod_sq(height_H(x) for x in xs)
        if not _ok_sq(V.HH, rhs):
            fails.append(f"spanning data N={N}")
    return count, fails


def gram_lemma(count: int, seed: int = 4) -> tuple[int, list]:
    rng = random.Random(seed)
    fails = []
    checked = 0
    while checked < count:
        N = rng.randint(2, 5)
        J = rng.randint(1, N)
        F = [[0] * N for _ in range(N)]
        for i in range(N):
            for j in range(i, N):
                F[i][j] = F[j][i] = Fraction(rng.randint(-9, 9), rng.randint(1, 3))
        X = _lemma_vectors(rng, N, J)
        XF = matmul(X, F, Fraction(0))
        if rank(XF, QQ) < J:
            continue
        checked += 1
        lhs = Subspace(XF, QQ, N).HH
        HF = height_H([a for r in F for a in r])
        rhs = N ** (3 * J) * HF.sq ** J * _prod_sq(height_H(x) for x in X)
        if not _ok_sq(lhs, rhs):
            fails.append(f"XF height N={N} J={J}")
    return checked, fails


def _sharing_pair(rng, N):
    """Two subspaces which often meet nontrivially."""
    L1 = rng.randint(1, N - 1)
    L2 = rng.randint(1, N - 1)
    U1 = rand_subspace(rng, N, L1, 9)
    rows = list(U1.basis[: rng.randint(0, min(L1, L2 - 1))])
    while len(rows) < L2:
        v = rand_q_vector(rng, N, 9)
        if rank(rows + [v], QQ) == len(rows) + 1:
            rows.append(v)
    return U1, Subspace(rows, QQ, N)


def intersection_lemma(count: int, seed: int = 5, strong: bool = False) -> tuple[int, list]:
    rng = random.Random(seed + (100 if strong else 0))
    fails = []
    for _ in range(count):
        N = rng.randint(2, 5)
        U1, U2 = _sharing_pair(rng, N)
        meet = U1.intersect(U2)
        rhs = U1.HH.sq * U2.HH.sq
        if strong:
            join = U1 + U2
            ok = join.HH.sq * meet.HH.sq <= rhs
        else:
            ok = meet.HH.sq <= rhs
        if not ok:
            fails.append(f"intersection N={N} dims {U1.dim},{U2.dim}")
    return count, fails


def rand_poly(rng: random.Random, N: int, terms: int, max_deg: int, field=QQ,
              homogeneous: bool = False):
    deg = rng.randint(1, max_deg)
    out = {}
    for _ in range(terms):
        e = [0] * N
        for _ in range(deg if homogeneous else rng.randint(0, max_deg)):
            e[rng.randrange(N)] += 1
        if field is QQ:
            c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2]))
        else:
            c = field(rng.randint(1, field.q - 1)) * field.t ** rng.randint(0, 1)
        out[tuple(e)] = c
    return MultiPoly(out, N, field)


def reduction_suite(count: int, seed: int = 7) -> tuple[int, list]:
    rng = random.Random(seed)
    fails = []
    K3 = FunctionField(3)
    for n in range(count):
        field = K3 if n % 5 == 4 else QQ
        N = rng.randint(1, 4)
        P1 = rand_poly(rng, N, rng.randint(1, 6), 4, field)
        P2 = rand_poly(rng, N, rng.randint(1, 3), 3, field)
        if not P2:
            P2 = rand_poly(rng, N, 1, 1, field) + 1
        perm = list(range(N))
        rng.shuffle(perm)
        order = MonomialOrder(perm)
        P1r, R = reduce_by_single(P1, P2, order)
        if P1r + R * P2 - P1:
            fails.append(f"identity fails {P1} / {P2}")
        lm = order.leading(P2)
        if any(_divides(lm, e) for e in P1r.terms):
            fails.append(f"leading monomial divides a remainder term {P1} / {P2}")
    return count, fails
