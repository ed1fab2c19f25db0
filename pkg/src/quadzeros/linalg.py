"""Exact linear algebra over Q and F_p(t).

Matrices are plain sequences of rows.  Rank and determinants go through
fraction-free (Bareiss) elimination on ring-scaled rows; kernels through
reduced row echelon form.  ``ring_kernel`` computes a saturated basis of
the kernel over the ring of integers (Z or F_p[t]) by Euclidean column
reduction.
"""

from __future__ import annotations

from itertools import combinations
from typing import Sequence

from .fields import Field

Matrix = Sequence[Sequence]


def transpose(M: Matrix) -> list[list]:
    return [list(col) for col in zip(*M)]


def matmul(A: Matrix, B: Matrix, zero) -> list[list]:
    Bt = list(zip(*B))
    out = []
    for row in A:
        out.append([sum((a * b for a, b in zip(row, col)), zero) for col in Bt])
    return out


def mat_vec(A: Matrix, x: Sequence, zero) -> list:
    return [sum((a * b for a, b in zip(row, x)), zero) for row in A]


def dot(x: Sequence, y: Sequence, zero):
    return sum((a * b for a, b in zip(x, y)), zero)


def ring_rows(M: Matrix, field: Field) -> tuple[list[list], list]:
    """Scale each row into the ring.  Returns (ring rows, row scale factors)."""
    rows, scales = [], []
    for row in M:
        den = field.ring_one
        for x in row:
            den = field.ring_lcm(den, field.numden(field(x))[1])
        out = []
        for x in row:
            n, d = field.numden(field(x))
            out.append(n * field.ring_divexact(den, d))
        rows.append(out)
        scales.append(den)
    return rows, scales


def _bareiss(M: list[list], one, *, square: bool):
    """In-place fraction-free elimination.  Returns (rank, sign, last pivot)."""
    m = len(M)
    n = len(M[0]) if m else 0
    prev = one
    r = 0
    sign = 1
    for c in range(n):
        if r == m:
            break
        piv = next((i for i in range(r, m) if M[i][c]), None)
        if piv is None:
            if square:
                return r, sign, None
            continue
        if piv != r:
            M[r], M[piv] = M[piv], M[r]
            sign = -sign
        pr = M[r]
        for i in range(r + 1, m):
            row = M[i]
            a = row[c]
            for j in range(c + 1, n):
                row[j] = (pr[c] * row[j] - a * pr[j]) // prev
            row[c] = pr[c] * 0
        prev = pr[c]
        r += 1
    return r, sign, prev if r else None


def rank(M: Matrix, field: Field) -> int:
    """Exact rank by fraction-free elimination."""
    if not M or not M[0]:
        return 0
    rows, _ = ring_rows(M, field)
    r, _, _ = _bareiss(rows, field.ring_one, square=False)
    return r


def det(M: Matrix, field: Field):
    n = len(M)
    if n == 0:
        return field.one
    if any(len(row) != n for row in M):
        raise ValueError("determinant of a non-square matrix")
    rows, scales = ring_rows(M, field)
    r, sign, last = _bareiss(rows, field.ring_one, square=True)
    if r < n:
        return field.zero
    value = field.from_ring(last * sign)
    for s in scales:
        value = value / field.from_ring(s)
    return value


def ring_det(M: list[list], one):
    """Determinant of a square matrix over Z or F_p[t]."""
    n = len(M)
    if n == 0:
        return one
    rows = [list(r) for r in M]
    r, sign, last = _bareiss(rows, one, square=True)
    if r < n:
        return one * 0
    return last * sign


def all_minors(M: Matrix, k: int, field: Field) -> list:
    """All k x k minors: row index sets in lex order, then column sets."""
    m = len(M)
    n = len(M[0]) if m else 0
    if not 0 < k <= min(m, n):
        raise ValueError(f"minor size {k} out of range for a {m}x{n} matrix")
    out = []
    for rs in combinations(range(m), k):
        for cs in combinations(range(n), k):
            out.append(det([[M[i][j] for j in cs] for i in rs], field))
    return out


def rref(M: Matrix, field: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    rows = [[field(x) for x in row] for row in M]
    m = len(rows)
    n = len(rows[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = field.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows[:r], pivots


def primitive_vector(vec: Sequence, field: Field) -> tuple:
    """Primitive representative as field elements (content 1, normalized)."""
    prim = field.primitive(vec)
    if prim is None:
        raise ValueError("zero vector has no primitive representative")
    return tuple(field.from_ring(a) for a in prim)


def kernel_basis(M: Matrix, field: Field, ncols: int | None = None) -> list[tuple]:
    """Basis of {x : Mx = 0} made of primitive vectors."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots = rref(M, field) if M else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * ncols
        x[f] = field.one
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(primitive_vector(x, field))
    return basis


def in_span(vectors: Sequence[Sequence], x: Sequence, field: Field) -> bool:
    if not vectors:
        return all(not field(a) for a in x)
    return rank(list(vectors) + [list(x)], field) == rank(vectors, field)


def ring_kernel(A: Matrix, N: int, field: Field) -> list[list]:
    """Saturated basis of {x in R^N : A x = 0} for a ring matrix A.

    Column operations by the Euclidean algorithm bring A to column echelon
    form A U; the columns of the unimodular U beyond the echelon part span
    the kernel over R.
    """
    one, zero = field.ring_one, field.ring_zero
    M = [list(row) for row in A]
    U = [[one if i == j else zero for j in range(N)] for i in range(N)]

    def colop(dst, src, factor):
        # column dst -= factor * column src
        for row in M:
            row[dst] = row[dst] - factor * row[src]
        for row in U:
            row[dst] = row[dst] - factor * row[src]

    def swap(a, b):
        for row in M:
            row[a], row[b] = row[b], row[a]
        for row in U:
            row[a], row[b] = row[b], row[a]

    c = 0
    for row in M:
        if c == N:
            break
        while True:
            nz = [j for j in range(c, N) if row[j]]
            if not nz:
                break
            j0 = min(nz, key=lambda j: field.ring_size(row[j]))
            if j0 != c:
                swap(c, j0)
            done = True
            for j in range(c + 1, N):
                if row[j]:
                    q = divmod(row[j], row[c])[0]
                    colop(j, c, q)
                    if row[j]:
                        done = False
            if done:
                break
        if row[c]:
            c += 1
    return [[U[i][j] for i in range(N)] for j in range(c, N)]
