"""Quadratic spaces (V, F): radical, complements, hyperbolic pairs, Witt data."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

from .bounds import DEFAULT_SLACK, bound_evaluator, level_cap
from .certs import DIAGNOSTIC, Claim, bound_claim, check_claim
from .constants import ConstantsTable
from .errors import PreconditionError
from .fields import QQ, Field
from .heights import Height, Subspace, height_h, matrix_height
from .lattice import siegel_reduce
from .linalg import kernel_basis, rank
from .polyalg import MultiPoly, nonvanishing_point
from .search import DEFAULT_BUDGET, SubspaceSearch


class QuadForm:
    """Symmetric coefficient matrix F = (f_ij); F(x) = sum f_ij x_i x_j."""

    def __init__(self, matrix: Sequence[Sequence], field: Field = QQ):
        self.field = field
        M = tuple(tuple(field(a) for a in row) for row in matrix)
        n = len(M)
        if n == 0 or any(len(r) != n for r in M):
            raise ValueError("quadratic form needs a square nonempty matrix")
        for i in range(n):
            for j in range(i + 1, n):
                if M[i][j] != M[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i + 1},{j + 1})")
        if not any(a for r in M for a in r):
            raise ValueError("quadratic form is identically zero")
        self.N = n
        self.matrix = M

    @cached_property
    def H(self) -> Height:
        """Height of the coefficient matrix viewed as a vector in K^(N^2)."""
        return matrix_height(self.matrix, self.field)

    @cached_property
    def poly(self) -> MultiPoly:
        return MultiPoly.quadratic_form(self.matrix, self.field)

    def bilinear(self, x: Sequence, y: Sequence):
        return bilinear_eval(self, x, y)

    def __call__(self, x: Sequence):
        return bilinear_eval(self, x, x)

    def restrict(self, basis: Sequence[Sequence]) -> "QuadForm | None":
        """Gram matrix A F A^T of a basis (rows); None when it vanishes."""
        F = self.field
        G = [[self.bilinear(a, b) for b in basis] for a in basis]
        if not any(g for r in G for g in r):
            return None
        return QuadForm(G, F)

    def gram(self, basis: Sequence[Sequence]) -> list[list]:
        return [[self.bilinear(a, b) for b in basis] for a in basis]

    def __eq__(self, other) -> bool:
        return isinstance(other, QuadForm) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __repr__(self) -> str:
        return f"QuadForm(N={self.N}, {self.poly})"


def bilinear_eval(F: QuadForm, x: Sequence, y: Sequence):
    K = F.field
    if len(x) != F.N or len(y) != F.N:
        raise ValueError("dimension mismatch in bilinear_eval")
    x = [K(a) for a in x]
    y = [K(a) for a in y]
    total = K.zero
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = F.matrix[i]
        acc = K.zero
        for j, yj in enumerate(y):
            if yj and row[j]:
                acc = acc + row[j] * yj
        total = total + xi * acc
    return total


@dataclass
class WittData:
    radical: list
    pairs: list
    anisotropic: list
    search_cap: int | None
    claims: list = dc_field(default_factory=list)

    @property
    def lam(self) -> int:
        return len(self.radical)

    @property
    def omega(self) -> int:
        return len(self.pairs)

    @property
    def m(self) -> int:
        return self.lam + self.omega


class QuadSpace:
    """The pair (V, F) with cached radical and rank.

    Witt data are computed on first use since they need a point search.
    """

    def __init__(self, V: Subspace, F: QuadForm, *, budget: int = DEFAULT_BUDGET,
                 cap: int | None = None, slack: float = DEFAULT_SLACK):
        if V.N != F.N:
            raise ValueError("subspace and form live in different dimensions")
        if V.field != F.field:
            raise ValueError("subspace and form over different fields")
        self.V = V
        self.F = F
        self.field = V.field
        self.budget = budget
        self.cap = cap
        self.slack = slack
        self.radical = radical(self)

    @property
    def L(self) -> int:
        return self.V.dim

    @property
    def N(self) -> int:
        return self.V.N

    @property
    def lam(self) -> int:
        return self.radical.dim

    @property
    def r(self) -> int:
        return self.L - self.lam

    @cached_property
    def witt(self) -> WittData:
        return witt_decompose(self)

    @property
    def omega(self) -> int:
        return self.witt.omega

    @property
    def m(self) -> int:
        return self.witt.m

    @property
    def is_isotropic(self) -> bool:
        return self.lam > 0 or self.witt.omega > 0

    def form_vanishes(self) -> bool:
        return self.r == 0

    def sub(self, U: Subspace) -> "QuadSpace":
        return QuadSpace(U, self.F, budget=self.budget, cap=self.cap, slack=self.slack)

    def is_nonsingular(self, x: Sequence) -> bool:
        return any(self.F.bilinear(x, v) for v in self.V.basis)

    def __repr__(self) -> str:
        return f"QuadSpace(L={self.L}, N={self.N}, lambda={self.lam}, {self.F!r})"


def radical(qs: QuadSpace) -> Subspace:
    """V^perp = X ker(X F X^T) for a basis matrix X of V."""
    V, F = qs.V, qs.F
    K = V.field
    if V.dim == 0:
        return Subspace.zero(K, V.N)
    G = F.gram(V.basis)
    coeffs = kernel_basis(G, K, V.dim)
    vecs = [[sum((c[k] * V.basis[k][j] for k in range(V.dim)), K.zero) for j in range(V.N)]
            for c in coeffs]
    return Subspace(vecs, K, V.N, check=False)


def orth_complement_in(U: Subspace, qs: QuadSpace) -> Subspace:
    """{x in V : F(x, u) = 0 for all u in U}."""
    V, F = qs.V, qs.F
    K = V.field
    if not V.contains_subspace(U):
        raise PreconditionError("U is not contained in V")
    if U.dim == 0:
        return V
    M = [[F.bilinear(u, x) for x in V.basis] for u in U.basis]
    coeffs = kernel_basis(M, K, V.dim)
    vecs = [[sum((c[k] * V.basis[k][j] for k in range(V.dim)), K.zero) for j in range(V.N)]
            for c in coeffs]
    W = Subspace(vecs, K, V.N, check=False)
    if rank(F.gram(U.basis), K) == U.dim:
        assert W.dim + U.dim == V.dim and (W + U).dim == V.dim, "orthogonal splitting failed"
    return W


def quadric_map(x0: Sequence, qs: QuadSpace, t: Sequence) -> tuple:
    """z = F(t) x0 - 2 F(x0, t) t, a zero of F whenever x0 is."""
    F, K = qs.F, qs.field
    if not qs.V.contains(x0) or not qs.V.contains(t):
        raise PreconditionError("x0 and t must lie in V")
    if F(x0):
        raise PreconditionError("x0 is not isotropic")
    if not qs.is_nonsingular(x0):
        raise PreconditionError("x0 is singular (lies in the radical)")
    a, b = F(t), F.bilinear(x0, t)
    z = tuple(a * K(p) - 2 * b * K(s) for p, s in zip(x0, t))
    assert not F(z), "quadric_map produced a non-zero of F"
    return z


def _primitive_field_vector(v, K: Field) -> tuple:
    prim = K.primitive([K(a) for a in v])
    return tuple(K.from_ring(a) for a in prim)


def hyperbolic_pair(H: Subspace, F: QuadForm, *, budget: int = DEFAULT_BUDGET,
                    slack: float = DEFAULT_SLACK):
    """(x, y, claims) with F(x) = F(y) = 0, F(x, y) != 0 and span{x, y} = H."""
    K = H.field
    table = ConstantsTable.for_field(K)
    if H.dim != 2:
        raise PreconditionError("a hyperbolic plane has dimension 2")
    G = F.gram(H.basis)
    if G[0][0] * G[1][1] - G[0][1] * G[1][0] == 0:
        raise PreconditionError("not a hyperbolic plane: the plane is degenerate")
    HF, HH = F.H, H.HH
    xb = bound_evaluator("x_bound", {"HF": HF, "HH": HH}, table)
    found = SubspaceSearch(H, F.matrix, max_level=level_cap(xb, K), budget=budget).first()
    if found is None:
        raise PreconditionError(
            "not a hyperbolic plane: no isotropic vector below the certified bound")
    x = tuple(K.from_ring(a) for a in found.x)
    claims: list[Claim] = [
        bound_claim("hyperbolic x", "x_bound", {"HF": HF, "HH": HH}, height_h(x, K), table,
                    slack=slack, status=DIAGNOSTIC)]
    basis, _, _, _ = siegel_reduce(H)
    basis = [tuple(K.from_ring(a) for a in v) for v in basis]
    FA = F.restrict(basis)
    w, _ = nonvanishing_point(FA.poly, 2, budget=budget)
    z = tuple(sum((w[k] * basis[k][j] for k in range(2)), K.zero) for j in range(H.N))
    claims.append(bound_claim("hyperbolic z", "z_bound", {"HH": HH}, height_h(z, K), table,
                              slack=slack, status=DIAGNOSTIC))
    fz, fxz = F(z), F.bilinear(x, z)
    y = tuple(fz * a - 2 * fxz * b for a, b in zip(x, z))
    claims.append(bound_claim("hyperbolic y", "y_bound", {"N": H.N, "HF": HF, "HH": HH},
                              height_h(y, K), table, slack=slack, status=DIAGNOSTIC))
    ok = not F(y) and bool(F.bilinear(x, y))
    claims.append(check_claim("hyperbolic pair", ok, what="F(x)=F(y)=0, F(x,y)!=0"))
    if not ok:
        raise PreconditionError("not a hyperbolic plane")
    return x, _primitive_field_vector(y, K), claims


def _complement_of(R: Subspace, V: Subspace) -> Subspace:
    """A complement of R in V built from basis vectors of V."""
    K = V.field
    rows = list(R.basis)
    picked = []
    for v in V.basis:
        if rank(rows + [v], K) > len(rows):
            rows.append(v)
            picked.append(v)
    return Subspace(picked, K, V.N, check=False)


def witt_decompose(qs: QuadSpace, *, cap: int | None = None, budget: int | None = None
                   ) -> WittData:
    """Radical, hyperbolic pairs and anisotropic remainder of (V, F).

    The regular part is split greedily: the first isotropic vector (in the
    coordinates of a reduced basis) starts a hyperbolic plane, which is then
    split off orthogonally.  Failure to find one below the search level
    certifies anisotropy only up to that level.
    """
    K, F = qs.field, qs.F
    cap = qs.cap if cap is None else cap
    budget = qs.budget if budget is None else budget
    table = ConstantsTable.for_field(K)
    W = _complement_of(qs.radical, qs.V)
    pairs = []
    claims: list[Claim] = []
    used_cap = None
    while W.dim >= 2:
        basis, _, _, _ = siegel_reduce(W)
        basis = [tuple(K.from_ring(a) for a in v) for v in basis]
        FA = F.restrict(basis)
        bound = bound_evaluator("ns_x", {"L": W.dim, "HFA": FA.H}, table)
        level = level_cap(bound, K) if cap is None else cap
        used_cap = level if used_cap is None else max(used_cap, level)
        pt = SubspaceSearch(Subspace.full(K, W.dim), FA.matrix, max_level=level,
                            budget=budget).first()
        if pt is None:
            break
        x = tuple(sum((K.from_ring(pt.x[k]) * basis[k][j] for k in range(W.dim)), K.zero)
                  for j in range(W.N))
        u = next(b for b in basis if F.bilinear(x, b))
        plane = Subspace([x, u], K, W.N)
        px, py, pc = hyperbolic_pair(plane, F, budget=budget, slack=qs.slack)
        claims.extend(pc)
        pairs.append((px, py))
        W = orth_complement_in(plane, qs.sub(W))
    return WittData(list(qs.radical.basis), pairs, list(W.basis), used_cap, claims)


def extend_to_max_isotropic(x: Sequence, qs: QuadSpace, m: int | None = None, *,
                            budget: int | None = None) -> Subspace:
    """A totally isotropic W of dimension m with x in W and V^perp in W."""
    K, F = qs.field, qs.F
    budget = qs.budget if budget is None else budget
    x = tuple(K(a) for a in x)
    if not any(x) or not qs.V.contains(x) or F(x):
        raise PreconditionError("x must be a nonzero isotropic vector of V")
    m = qs.m if m is None else m
    S = Subspace.spanned_by([x] + list(qs.radical.basis), K, qs.N)
    while S.dim < m:
        C = orth_complement_in(S, qs)
        pt = SubspaceSearch(C, F.matrix, accept=lambda y: not S.contains(y),
                            budget=budget).first()
        if pt is None:  # pragma: no cover - the search is unbounded
            raise PreconditionError("no isotropic extension found")
        S = S + Subspace([[K.from_ring(a) for a in pt.x]], K, qs.N)
    gram = F.gram(S.basis)
    assert not any(g for r in gram for g in r), "extension is not totally isotropic"
    return S
