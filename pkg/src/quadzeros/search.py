"""Deterministic enumeration of projective points of a subspace.

Points of V are produced as normalized primitive ring vectors (integers with
first nonzero entry positive over Q, polynomials with first nonzero entry
monic over F_p(t)) in *pipeline order*: by level (H over Q, 1 + log H over
F_p(t)), ties broken lexicographically on ``ring_key`` with the last
coordinate most significant.

V is parametrized by the coordinates of x at the pivot columns of its
reduced echelon form.  Those coordinates have size at most the level of x,
so after all parameter tuples of max size s are processed every point of
level <= s is known and can be released.  An optional quadratic form is
solved for one parameter, which turns an L-dimensional scan into an
(L-1)-dimensional one.
"""

from __future__ import annotations

import heapq
from itertools import product
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import SearchBudgetExceeded
from .fields import Field
from .heights import Subspace
from .linalg import ring_rows

DEFAULT_BUDGET = 2_000_000
_NP_LIMIT = 1 << 60
_CHUNK = 1 << 18


class Point(NamedTuple):
    level: int
    key: tuple
    x: tuple


def pipeline_key(x: Sequence, field: Field) -> tuple:
    return tuple(field.ring_key(a) for a in reversed(x))


def level_of(x: Sequence, field: Field) -> int:
    return max(field.ring_size(a) for a in x)


def ring_form(F: Sequence[Sequence], field: Field) -> list[list]:
    """Scale a symmetric matrix into the ring by one common denominator."""
    den = field.ring_one
    for row in F:
        for a in row:
            den = field.ring_lcm(den, field.numden(field(a))[1])
    out = []
    for row in F:
        r = []
        for a in row:
            n, d = field.numden(field(a))
            r.append(n * field.ring_divexact(den, d))
        out.append(r)
    return out


class SubspaceSearch:
    """Iterator over the points of V (optionally zeros of F) in pipeline order.

    ``accept`` filters emitted points; ``max_level`` stops the scan after
    that level; ``budget`` limits the number of parameter tuples visited and
    raises ``SearchBudgetExceeded`` when exhausted.
    """

    def __init__(self, V: Subspace, form: Sequence[Sequence] | None = None, *,
                 accept: Callable[[tuple], bool] | None = None,
                 max_level: int | None = None, budget: int = DEFAULT_BUDGET,
                 use_numpy: bool = True):
        self.V = V
        self.field = F = V.field
        self.accept = accept
        self.max_level = max_level
        self.budget = budget
        self.visited = 0
        self.L = V.dim
        self.N = V.N
        echelon = V.echelon
        den = F.ring_one
        for row in echelon:
            for a in row:
                den = F.ring_lcm(den, F.numden(a)[1])
        self.den = den
        self.R = [[F.numden(a)[0] * F.ring_divexact(den, F.numden(a)[1]) for a in row]
                  for row in echelon]
        self.G = None
        self.solve_for = None
        if form is not None:
            Fr = ring_form(form, F)
            RF = [[sum((r[k] * Fr[k][j] for k in range(self.N)), F.ring_zero)
                   for j in range(self.N)] for r in self.R]
            G = [[sum((RF[a][k] * self.R[b][k] for k in range(self.N)), F.ring_zero)
                  for b in range(self.L)] for a in range(self.L)]
            if any(g for row in G for g in row):
                self.G = G
                diag = [i for i in range(self.L) if G[i][i]]
                self.solve_for = diag[0] if diag else next(
                    i for i in range(self.L) if any(G[i]))
        self.use_numpy = use_numpy and F.kind == "Q"

    # ---- shared helpers ---------------------------------------------------
    def _charge(self, n: int) -> None:
        self.visited += n
        if self.visited > self.budget:
            raise SearchBudgetExceeded(
                f"point search exceeded its budget of {self.budget} parameter tuples")

    def _finish(self, t: Sequence, heap: list) -> None:
        """Turn a full parameter tuple into a point and queue it if valid."""
        F = self.field
        if not any(t):
            return
        first = next(a for a in t if a)
        if F.ring_normalizer(first) != 1:
            return
        x = []
        for j in range(self.N):
            acc = F.ring_zero
            for tk, r in zip(t, self.R):
                if tk and r[j]:
                    acc = acc + tk * r[j]
            q = F.ring_divexact(acc, self.den)
            if q is None:
                return
            x.append(q)
        g = F.ring_zero
        for a in x:
            if a:
                g = F.ring_gcd(g, a)
                if F.ring_is_unit(g):
                    break
        if not F.ring_is_unit(g):
            return
        x = tuple(x)
        heapq.heappush(heap, Point(level_of(x, F), pipeline_key(x, F), x))

    def _roots(self, rest: Sequence) -> tuple[list, bool]:
        """Values of the solved parameter given the others.

        Returns (roots, is_line); ``is_line`` means every value is a root.
        """
        F = self.field
        i, G = self.solve_for, self.G
        a = G[i][i]
        others = [j for j in range(self.L) if j != i]
        b = F.ring_zero
        c0 = F.ring_zero
        for pos, j in enumerate(others):
            tj = rest[pos]
            if not tj:
                continue
            b = b + 2 * G[i][j] * tj
            for pos2, k in enumerate(others):
                tk = rest[pos2]
                if tk and G[j][k]:
                    c0 = c0 + G[j][k] * tj * tk
        if a:
            disc = b * b - 4 * a * c0
            s = F.ring_sqrt(disc)
            if s is None:
                return [], False
            out = []
            for r in ((-b + s), (-b - s)):
                v = F.ring_divexact(r, 2 * a)
                if v is not None and v not in out:
                    out.append(v)
            return out, False
        if b:
            v = F.ring_divexact(-c0, b)
            return ([v] if v is not None else []), False
        return [], not c0

    def _insert(self, rest: Sequence, v) -> tuple:
        i = self.solve_for
        return tuple(rest[:i]) + (v,) + tuple(rest[i:])

    # ---- shells -----------------------------------------------------------
    def _shell_tuples(self, n: int, s: int):
        F = self.field
        if s == 0:
            yield (F.ring_zero,) * n
            return
        inner = F.ring_box(s - 1)
        outer = F.ring_box(s)
        top = F.ring_shell(s)
        for k in range(n):
            yield from product(*([inner] * k + [top] + [outer] * (n - k - 1)))

    def _shell_count(self, n: int, s: int) -> int:
        F = self.field
        if s == 0:
            return 1
        a, b = len(F.ring_box(s)), len(F.ring_box(s - 1))
        return a ** n - b ** n

    def _process_shell_python(self, s: int, heap: list, lines: list) -> None:
        F = self.field
        if self.G is None:
            for t in self._shell_tuples(self.L, s):
                self._charge(1)
                self._finish(t, heap)
            return
        for rest in self._shell_tuples(self.L - 1, s):
            self._charge(1)
            roots, is_line = self._roots(rest)
            if is_line:
                lines.append(rest)
                for v in F.ring_box(s):
                    self._finish(self._insert(rest, v), heap)
                continue
            for v in roots:
                self._finish(self._insert(rest, v), heap)

    def _extend_lines(self, s: int, heap: list, lines: list) -> None:
        for rest in lines:
            for v in self.field.ring_shell(s):
                self._finish(self._insert(rest, v), heap)

    # ---- numpy fast path (Q only) ----------------------------------------
    def _np_ok(self, s: int) -> bool:
        if not self.use_numpy:
            return False
        L = max(self.L, 1)
        r = max((abs(a) for row in self.R for a in row), default=1)
        if self.G is None:
            return L * s * r < _NP_LIMIT
        g = max(abs(a) for row in self.G for a in row)
        disc = 8 * L * L * s * s * g * g + 1
        ti = 5 * L * s * g + s
        return disc < _NP_LIMIT and L * ti * r < _NP_LIMIT and L * L * s * s * g < _NP_LIMIT

    def _np_chunks(self, n: int, s: int):
        if s == 0:
            yield np.zeros((1, n), dtype=np.int64)
            return
        inner = np.arange(-(s - 1), s, dtype=np.int64)
        outer = np.arange(-s, s + 1, dtype=np.int64)
        top = np.array([s, -s], dtype=np.int64)
        for k in range(n):
            ranges = [inner] * k + [top] + [outer] * (n - k - 1)
            yield from _cartesian_chunks(ranges)

    def _np_finish(self, T: np.ndarray, heap: list) -> None:
        if T.shape[0] == 0:
            return
        first_idx = np.argmax(T != 0, axis=1)
        first = T[np.arange(T.shape[0]), first_idx]
        T = T[first > 0]
        if T.shape[0] == 0:
            return
        R = np.array(self.R, dtype=np.int64)
        X = T @ R
        den = int(self.den)
        if den != 1:
            X = X[np.all(X % den == 0, axis=1)] // den
        if X.shape[0] == 0:
            return
        g = np.gcd.reduce(X, axis=1)
        X = X[g == 1]
        lv = np.abs(X).max(axis=1)
        for row, level in zip(X.tolist(), lv.tolist()):
            x = tuple(row)
            heapq.heappush(heap, Point(level, pipeline_key(x, self.field), x))

    def _process_shell_numpy(self, s: int, heap: list, lines: list) -> None:
        if self.G is None:
            for T in self._np_chunks(self.L, s):
                self._charge(T.shape[0])
                self._np_finish(T, heap)
            return
        i = self.solve_for
        G = np.array(self.G, dtype=np.int64)
        others = [j for j in range(self.L) if j != i]
        a = int(G[i, i])
        gi = G[others, i]
        Gr = G[np.ix_(others, others)]
        for T in self._np_chunks(self.L - 1, s):
            self._charge(T.shape[0])
            b = 2 * (T @ gi)
            c0 = np.einsum("ij,jk,ik->i", T, Gr, T)
            full = []
            if a:
                disc = b * b - 4 * a * c0
                ok = disc >= 0
                T2, b2, d2 = T[ok], b[ok], disc[ok]
                r = np.floor(np.sqrt(d2.astype(np.float64))).astype(np.int64)
                for _ in range(2):
                    r = np.where(r * r > d2, r - 1, r)
                    r = np.where((r + 1) * (r + 1) <= d2, r + 1, r)
                sq = r * r == d2
                T2, b2, r = T2[sq], b2[sq], r[sq]
                for sign in (1, -1):
                    if sign == -1:
                        keep = r != 0
                        T3, num = T2[keep], -b2[keep] - r[keep]
                    else:
                        T3, num = T2, -b2 + r
                    div = num % (2 * a) == 0
                    full.append(np.insert(T3[div], i, num[div] // (2 * a), axis=1))
            else:
                nz = b != 0
                Tn, bn, cn = T[nz], b[nz], c0[nz]
                div = (-cn) % bn == 0
                full.append(np.insert(Tn[div], i, (-cn[div]) // bn[div], axis=1))
                flat = (~nz) & (c0 == 0)
                for rest in T[flat].tolist():
                    rest = tuple(rest)
                    lines.append(rest)
                    for v in range(-s, s + 1):
                        self._finish(self._insert(rest, v), heap)
            for A in full:
                self._np_finish(A, heap)

    # ---- driver -----------------------------------------------------------
    def __iter__(self) -> Iterator[Point]:
        if self.L == 0:
            return
        heap: list[Point] = []
        lines: list = []
        s = 0 if self.G is not None else 1
        while self.max_level is None or s <= self.max_level:
            if lines:
                self._extend_lines(s, heap, lines)
            if self.use_numpy and self._np_ok(s):
                self._process_shell_numpy(s, heap, lines)
            else:
                self._process_shell_python(s, heap, lines)
            while heap and heap[0].level <= s:
                pt = heapq.heappop(heap)
                if self.accept is None or self.accept(pt.x):
                    yield pt
            s += 1

    def first(self) -> Point | None:
        return next(iter(self), None)


def _cartesian_chunks(ranges: list[np.ndarray]):
    total = 1
    for r in ranges:
        total *= len(r)
    if total == 0:
        return
    if total <= _CHUNK or len(ranges) == 1:
        grids = np.meshgrid(*ranges, indexing="ij")
        yield np.stack([g.ravel() for g in grids], axis=1)
        return
    head, rest = ranges[0], ranges[1:]
    for v in head:
        for chunk in _cartesian_chunks(rest):
            yield np.insert(chunk, 0, v, axis=1)


def affine_points(field: Field, n: int, *, accept=None, max_level=None,
                  budget: int = DEFAULT_BUDGET) -> Iterator[tuple[int, tuple]]:
    """Points z of K^n in nondecreasing h(z), as (level, z).

    z corresponds to the projective point (y0, y) with y0 != 0 and z = y/y0;
    y0 is the least significant coordinate in the tie-break.
    """
    V = Subspace.full(field, n + 1)

    def ok(y):
        if not y[0]:
            return False
        if accept is None:
            return True
        return accept(_affine(y, field))

    for pt in SubspaceSearch(V, accept=ok, max_level=max_level, budget=budget):
        yield pt.level, _affine(pt.x, field)


def _affine(y: tuple, field: Field) -> tuple:
    y0 = field.from_ring(y[0])
    return tuple(field.from_ring(a) / y0 for a in y[1:])


def ring_vector(x: Sequence, field: Field) -> tuple:
    """Normalized primitive ring representative of a nonzero vector."""
    prim = field.primitive([field(a) for a in x])
    if prim is None:
        raise ValueError("zero vector")
    return prim


__all__ = [
    "DEFAULT_BUDGET", "Point", "SubspaceSearch", "affine_points", "level_of",
    "pipeline_key", "ring_form", "ring_rows", "ring_vector",
]
