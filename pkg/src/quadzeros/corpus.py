"""Seeded random problem generators for the test corpora."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

from .errors import SearchBudgetExceeded
from .fields import QQ, FunctionField, GFPoly
from .linalg import rank
from .oracle import minimal_zero
from .polyalg import MultiPoly
from .problem import canonical

CONFIRM_CAP = 1.1  # log-height cap for the oracle's confirmation of an avoiding zero (H <= 3)


def _sym_int(rng: random.Random, N: int, bound: int) -> list[list[int]]:
    M = [[0] * N for _ in range(N)]
    for i in range(N):
        for j in range(i, N):
            if rng.random() < 0.6:
                M[i][j] = M[j][i] = rng.randint(-bound, bound)
    if not any(a for r in M for a in r):
        M[0][1] = M[1][0] = 1
    return M


def _plant_zero(rng: random.Random, M: list[list[int]]) -> None:
    """Adjust one diagonal entry so that a small vector becomes isotropic."""
    N = len(M)
    v = [rng.randint(-1, 1) for _ in range(N)]
    k = rng.randrange(N)
    v[k] = 1
    rest = sum(M[i][j] * v[i] * v[j] for i in range(N) for j in range(N)) - M[k][k]
    M[k][k] = -rest


def _random_form(rng: random.Random, N: int, terms: int, degree: int) -> list:
    out = {}
    for _ in range(terms):
        e = [0] * N
        for _ in range(degree):
            e[rng.randrange(N)] += 1
        out[tuple(e)] = rng.choice([-3, -2, -1, 1, 2, 3])
    return [[list(e), str(c)] for e, c in sorted(out.items()) if c]


def random_main_problem(rng: random.Random) -> dict:
    """Problem over Q with N <= 5, L <= 4, |coefficients| <= 5, J <= 2, degrees <= 3."""
    N = rng.randint(2, 5)
    M = _sym_int(rng, N, 5)
    if rng.random() < 0.7:
        _plant_zero(rng, M)
        if max(abs(a) for r in M for a in r) > 5 or not any(a for r in M for a in r):
            M = _sym_int(rng, N, 5)
    obj: dict = {"field": {"kind": "Q"}, "N": N,
                 "F": [[str(a) for a in row] for row in M]}
    L = rng.randint(max(1, N - 2), min(N, 4))
    if L < N:
        while True:
            B = [[rng.randint(-2, 2) for _ in range(N)] for _ in range(L)]
            if rank(B, QQ) == L:
                break
        obj["V"] = [[str(a) for a in row] for row in B]
    J = rng.randint(0, 2)
    obj["S"] = [[_random_form(rng, N, rng.randint(1, 3), rng.randint(1, 3))
                 for _ in range(rng.randint(1, 2))] for _ in range(J)]
    obj["S"] = [[p for p in fam if p] or [[[1] + [0] * (N - 1), "1"]] for fam in obj["S"]]
    return obj


def main_corpus(count: int, seed: int, *, confirm_cap: float = CONFIRM_CAP) -> list[dict]:
    """Instances whose avoiding zero is confirmed by the oracle below ``confirm_cap``."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        obj = random_main_problem(rng)
        try:
            if minimal_zero(obj, confirm_cap, budget=200_000) is None:
                continue
        except SearchBudgetExceeded:
            continue
        out.append(obj)
    return out


def _ff_scalar(rng: random.Random, q: int, degree: int) -> str:
    c = [rng.randrange(q) for _ in range(degree + 1)]
    return str(GFPoly(c, q))


def random_ff_problem(rng: random.Random, q: int, *, max_N: int = 4, degree: int = 1,
                      subspace: bool = True) -> dict:
    """Problem over F_q(t) with coefficient degrees <= ``degree``."""
    K = FunctionField(q)
    N = rng.randint(2, max_N)
    while True:
        M = [["0"] * N for _ in range(N)]
        for i in range(N):
            for j in range(i, N):
                if rng.random() < 0.6:
                    M[i][j] = M[j][i] = _ff_scalar(rng, q, degree)
        if any(a != "0" for r in M for a in r):
            break
    obj: dict = {"field": {"kind": "Fq_t", "q": q}, "N": N, "F": M}
    if subspace and N > 2 and rng.random() < 0.5:
        L = rng.randint(2, N - 1)
        while True:
            B = [[_ff_scalar(rng, q, degree) for _ in range(N)] for _ in range(L)]
            if rank([[K.parse(a) for a in r] for r in B], K) == L:
                break
        obj["V"] = B
    obj["S"] = []
    return obj


def random_quad1(rng: random.Random):
    """(Q, P, i, j) over Q with Q = X_i X_j (c + Q1) + Q2, N <= 5, deg P <= 4.

    Roughly half the instances take P free of X_i, which lands in the branch
    where the reduced polynomial has no X_i part.
    """
    N = rng.randint(2, 5)
    i, j = rng.sample(range(N), 2)
    others = [v for v in range(N) if v not in (i, j)]
    K = QQ
    c = rng.choice([-3, -2, -1, 1, 2, 3])

    def poly_in(vars_, terms, max_deg, allow_const=True):
        P = MultiPoly.zero(N, K)
        for _ in range(terms):
            e = [0] * N
            for _ in range(rng.randint(0 if allow_const else 1, max_deg)):
                if vars_:
                    e[rng.choice(vars_)] += 1
            P = P + MultiPoly({tuple(e): Fraction(rng.choice([-2, -1, 1, 2]))}, N, K)
        return P

    Xi, Xj = MultiPoly.var(i, N, K), MultiPoly.var(j, N, K)
    Q1 = poly_in(others, rng.randint(0, 2), 1, allow_const=False) if rng.random() < 0.3 else \
        MultiPoly.zero(N, K)
    Q2 = poly_in(others, rng.randint(0, 3), 2)
    Q = Xi * Xj * (Q1 + c) + Q2
    if rng.random() < 0.5:
        P = poly_in([v for v in range(N) if v != i], rng.randint(1, 4), 4)
    else:
        P = poly_in(list(range(N)), rng.randint(1, 4), 4)
    return Q, P, i, j


def write_corpus(directory: str | Path, kind: str, count: int, seed: int) -> list[Path]:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    if kind == "main":
        objs = main_corpus(count, seed)
    else:
        rng = random.Random(seed)
        objs = [random_ff_problem(rng, rng.choice([3, 5])) for _ in range(count)]
    paths = []
    for n, obj in enumerate(objs):
        p = d / f"{kind}_{seed}_{n:04d}.json"
        p.write_text(canonical(obj))
        paths.append(p)
    return paths
