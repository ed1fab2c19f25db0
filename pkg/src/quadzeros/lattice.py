"""Reduced bases of the lattice V ∩ R^N (R = Z or F_p[t]).

Over Q the saturated integer lattice is LLL-reduced and, when the product of
heights is still above the Siegel bound, improved greedily from an
enumeration of short lattice vectors.  Over F_p(t) a row-reduced
(Mulders-Storjohann) basis already has degree sum equal to the log-height
of V, which is exactly the Siegel bound at genus 0.
"""

from __future__ import annotations

from itertools import product
from math import gcd
from typing import Sequence

import numpy as np
from sympy import ZZ
from sympy.polys.matrices import DomainMatrix

from .bounds import bound_evaluator, check_bound
from .constants import ConstantsTable
from .errors import SearchBudgetExceeded
from .fields import QQ, Field, GFPoly
from .heights import Height, Subspace, height_of_ring_vector
from .linalg import ring_det
from .search import pipeline_key

_IMPROVE_BUDGET = 200_000


def lll(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    L, N = len(rows), len(rows[0])
    M = DomainMatrix([[ZZ(int(a)) for a in r] for r in rows], (L, N), ZZ)
    return [tuple(int(a) for a in r) for r in M.lll().to_Matrix().tolist()]


def _gf_dependency(vectors: list[list[int]], p: int) -> list[int] | None:
    """Nonzero a with sum a_i v_i = 0 over GF(p), or None."""
    n = len(vectors)
    rows = [list(v) + [1 if j == i else 0 for j in range(n)] for i, v in enumerate(vectors)]
    width = len(vectors[0]) if vectors else 0
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, n) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    if r == n:
        return None
    return rows[r][width:]


def row_reduce_ff(rows: Sequence[Sequence[GFPoly]], p: int) -> list[tuple[GFPoly, ...]]:
    """Row-reduced form: leading coefficient vectors independent over GF(p)."""
    rows = [list(r) for r in rows]
    while True:
        degs = [max(a.degree for a in r) for r in rows]
        lead = [[(a.c[d] if 0 <= d < len(a.c) else 0) for a in r] for r, d in zip(rows, degs)]
        dep = _gf_dependency(lead, p)
        if dep is None:
            return [tuple(r) for r in rows]
        k = max((i for i in range(len(rows)) if dep[i]), key=lambda i: degs[i])
        inv = pow(dep[k], -1, p)
        new = list(rows[k])
        for i, a in enumerate(dep):
            if i == k or not a:
                continue
            shift = GFPoly.monomial(degs[k] - degs[i], p, a * inv)
            new = [x + shift * y for x, y in zip(new, rows[i])]
        rows[k] = new


def _normalize(v: Sequence, field: Field) -> tuple:
    first = next(a for a in v if a)
    u = field.ring_normalizer(first)
    return tuple(a * u for a in v)


def _sort_basis(basis, field: Field) -> list[tuple]:
    basis = [_normalize(v, field) for v in basis]
    return sorted(basis, key=lambda v: (height_of_ring_vector(v, field), pipeline_key(v, field)))


def _product(basis, field: Field) -> Height:
    out = Height(exp=0) if field.kind == "Fq_t" else Height(sq=1)
    for v in basis:
        out = out * height_of_ring_vector(v, field)
    return out


def _improve_q(basis: list[tuple[int, ...]], budget: int) -> list[tuple[int, ...]]:
    """Greedy basis from short lattice vectors (in sup norm)."""
    L = len(basis)
    B = np.array(basis, dtype=float)
    R = max(max(abs(a) for a in v) for v in basis)
    pinv = np.linalg.pinv(B)  # N x L, c = v @ pinv
    N = B.shape[1]
    box = [int(np.floor(np.sqrt(N) * R * np.linalg.norm(pinv[:, i]))) + 1 for i in range(L)]
    total = 1
    for b in box:
        total *= 2 * b + 1
    if total > budget:
        raise SearchBudgetExceeded("Siegel basis refinement exceeded its budget")
    cands = []
    for c in product(*[range(-b, b + 1) for b in box]):
        if not any(c):
            continue
        first = next(a for a in c if a)
        if first < 0:
            continue
        g = 0
        for a in c:
            g = gcd(g, a)
        if g != 1:
            continue
        v = tuple(sum(ci * row[j] for ci, row in zip(c, basis)) for j in range(N))
        sup = max(abs(a) for a in v)
        if sup <= R:
            cands.append((sup, pipeline_key(v, QQ), c, v))
    cands.sort()
    chosen_c: list[tuple[int, ...]] = []
    chosen_v: list[tuple[int, ...]] = []
    for _, _, c, v in cands:
        trial = chosen_c + [c]
        if _is_primitive_set(trial):
            chosen_c.append(c)
            chosen_v.append(v)
            if len(chosen_c) == L:
                return chosen_v
    return basis


def _is_primitive_set(coeffs: list[tuple[int, ...]]) -> bool:
    """Do the rows extend to a basis of Z^L (gcd of maximal minors is 1)?"""
    from itertools import combinations

    k, L = len(coeffs), len(coeffs[0])
    g = 0
    for cs in combinations(range(L), k):
        g = gcd(g, ring_det([[r[j] for j in cs] for r in coeffs], 1))
        if g == 1:
            return True
    return False


def siegel_reduce(V: Subspace, *, budget: int = _IMPROVE_BUDGET, slack: float = 1e-9):
    """Reduced basis of V with its height product and the Siegel bound.

    Returns (basis as ring vectors, product of heights, log-bound interval,
    passed flag).
    """
    F = V.field
    table = ConstantsTable.for_field(F)
    bound = bound_evaluator("siegel_for_V", {"L": V.dim, "HV": V.HH}, table)
    if V.dim == 0:
        return [], _product([], F), bound, True
    lat = V.ring_basis
    if F.kind == "Q":
        basis = lll(lat)
        if not check_bound(_product(basis, F), bound, slack):
            try:
                basis = _improve_q(basis, budget)
            except SearchBudgetExceeded:
                pass
    else:
        basis = row_reduce_ff(lat, F.q)
    basis = _sort_basis(basis, F)
    prod = _product(basis, F)
    return basis, prod, bound, check_bound(prod, bound, slack)
