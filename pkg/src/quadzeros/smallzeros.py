"""Constructive small zeros: avoidance, quad1, the main pipeline and the appendix results."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Sequence

from .bounds import DEFAULT_SLACK, bound_evaluator, level_cap
from .certs import (DIAGNOSTIC, MAIN, Certificate, Claim, bound_claim, check_claim, mat_json,
                    vec_json)
from .constants import ConstantsTable
from .errors import BoundFailure, PreconditionError
from .fields import Field
from .heights import Height, Subspace, height_H, height_h, poly_height
from .lattice import siegel_reduce
from .linalg import rank
from .polyalg import (MonomialOrder, MultiPoly, nonvanishing_point, product_of,
                      reduce_by_single, restrict_to_basis)
from .quadspace import (QuadForm, QuadSpace, extend_to_max_isotropic, orth_complement_in)
from .search import DEFAULT_BUDGET, SubspaceSearch, affine_points, level_of


# ---------------------------------------------------------------------------
# avoidance systems

class AvoidanceSystem:
    """Families S_1..S_J of homogeneous polynomials; Z_S is the union of their zero sets."""

    def __init__(self, families: Sequence[Sequence[MultiPoly]], nvars: int, field: Field):
        fams = []
        for i, fam in enumerate(families):
            fam = list(fam)
            if not fam:
                raise PreconditionError(f"S_{i + 1} is empty")
            for P in fam:
                if not P:
                    raise PreconditionError(f"S_{i + 1} contains the zero polynomial")
                if not P.is_homogeneous:
                    raise PreconditionError(f"S_{i + 1} contains a non-homogeneous polynomial {P}")
                if P.nvars != nvars:
                    raise PreconditionError(f"S_{i + 1}: polynomial in the wrong number of variables")
            fams.append(fam)
        self.families = fams
        self.nvars = nvars
        self.field = field

    @classmethod
    def empty(cls, nvars: int, field: Field) -> "AvoidanceSystem":
        return cls([], nvars, field)

    @property
    def J(self) -> int:
        return len(self.families)

    @property
    def M(self) -> int:
        return sum(max(P.degree for P in fam) for fam in self.families)

    def witnesses(self, x: Sequence) -> list[int] | None:
        """Index of the first P in each S_i with P(x) != 0, or None if x is in Z_S."""
        out = []
        for fam in self.families:
            k = next((k for k, P in enumerate(fam) if P(x)), None)
            if k is None:
                return None
            out.append(k)
        return out

    def avoids(self, x: Sequence) -> bool:
        return self.witnesses(x) is not None

    def plus(self, P: MultiPoly) -> "AvoidanceSystem":
        return AvoidanceSystem(self.families + [[P]], self.nvars, self.field)

    def to_json(self) -> list:
        return [[P.to_json() for P in fam] for fam in self.families]


# ---------------------------------------------------------------------------
# helpers

def _table(K: Field) -> ConstantsTable:
    return ConstantsTable.for_field(K)


def _ring_to_field(v, K: Field) -> tuple:
    return tuple(K.from_ring(a) for a in v)


def _primitive(v, K: Field) -> tuple:
    prim = K.primitive([K(a) for a in v])
    if prim is None:
        raise ValueError("zero vector")
    return _ring_to_field(prim, K)


def _combine(coeffs: Sequence, basis: Sequence[Sequence], K: Field) -> tuple:
    n = len(basis[0])
    return tuple(sum((K(c) * K(b[j]) for c, b in zip(coeffs, basis)), K.zero) for j in range(n))


def _strict(cert: Certificate, strict: bool) -> Certificate:
    if strict:
        bad = [c for c in cert.claims if c.status == MAIN and not c.passed]
        if bad:
            raise BoundFailure("library defect: certified claim failed: "
                               + ", ".join(c.name for c in bad), trail=cert.to_json())
    return cert


def _zero_height(K: Field) -> Height:
    return Height(exp=0) if K.kind == "Fq_t" else Height(sq=1)


def _poly_H(P: MultiPoly) -> Height:
    return poly_height(P)[0]


# ---------------------------------------------------------------------------
# vanishing on the zero set

def _restricted_zero(P: MultiPoly, basis: Sequence[Sequence]) -> bool:
    if not basis:
        return True
    return not restrict_to_basis(P, basis)


def vanishes_on_zeros(P: MultiPoly, qs: QuadSpace, *, samples: int = 24) -> bool:
    """Does P vanish on every nontrivial zero of F in V?"""
    K = qs.field
    if not qs.V.dim:
        raise PreconditionError("V is the zero space")
    parts = [Q for d, Q in P.homogeneous_parts().items()]
    if qs.r == 0:
        return all(_restricted_zero(Q, qs.V.basis) for Q in parts)
    witt = qs.witt
    rad = list(qs.radical.basis)
    if witt.omega == 0:
        if qs.lam == 0:
            raise PreconditionError(
            f"no nontrivial zero below cap: F is anisotropic on V up to search level {qs.witt.search_cap}")
        return all(_restricted_zero(Q, rad) for Q in parts)
    x0, y0 = witt.pairs[0]
    if qs.r == 2:
        return all(_restricted_zero(Q, rad + [x0]) and _restricted_zero(Q, rad + [y0])
                   for Q in parts)
    F = qs.F
    V = qs.V
    # quick numerical look on the parametrized quadric
    for _, t in islice(affine_points(K, V.dim), samples):
        tv = _combine(t, V.basis, K)
        a, b = F(tv), F.bilinear(x0, tv)
        z = tuple(a * p - 2 * b * s for p, s in zip(x0, tv))
        if any(z) and P(z):
            return False
    # exact check: compose with the parametrization in coordinates of V
    A = list(V.basis)
    L = len(A)
    G = F.gram(A)
    c0 = V.coordinates(x0)
    Fs = MultiPoly.quadratic_form(G, K)
    Gc = [sum((G[k][j] * c0[k] for k in range(L)), K.zero) for j in range(L)]
    Bs = MultiPoly.linear(Gc, K)
    svars = [MultiPoly.var(k, L, K) for k in range(L)]
    zc = [Fs * c0[k] - Bs * 2 * svars[k] for k in range(L)]
    for Q in parts:
        QA = restrict_to_basis(Q, A)
        if QA.compose(zc):
            return False
    return True


def avoidance_polynomial(S: AvoidanceSystem, qs: QuadSpace) -> tuple[MultiPoly, list[int]]:
    """Product of the first member of each S_i not vanishing on Z(V, F)."""
    chosen, polys = [], []
    for i, fam in enumerate(S.families):
        k = next((k for k, P in enumerate(fam) if not vanishes_on_zeros(P, qs)), None)
        if k is None:
            raise PreconditionError(
                f"every polynomial of S_{i + 1} vanishes on the zero set of F in V")
        chosen.append(k)
        polys.append(fam[k])
    return product_of(polys, S.nvars, S.field), chosen


# ---------------------------------------------------------------------------
# quad1

@dataclass
class Quad1Result:
    z: tuple
    branch: str
    certificate: Certificate


def _q_shape(Q: MultiPoly, i: int, j: int):
    K = Q.field
    n = Q.nvars
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise PreconditionError("quad1 needs two distinct variable indices")
    c = K.zero
    q1: dict = {}
    q2: dict = {}
    for e, a in Q.terms.items():
        if (e[i], e[j]) == (1, 1):
            rest = e[:i] + (0,) + e[i + 1:]
            rest = rest[:j] + (0,) + rest[j + 1:]
            if not any(rest):
                c = a
            else:
                q1[rest] = a
        elif (e[i], e[j]) == (0, 0):
            q2[e] = a
        else:
            raise PreconditionError("Q is not of the form X_i X_j (c + Q1) + Q2")
    if not c:
        raise PreconditionError("Q is not of the form X_i X_j (c + Q1) + Q2 with c != 0")
    return c, MultiPoly(q1, n, K), MultiPoly(q2, n, K)


def _eliminate_product(P: MultiPoly, i: int, j: int, cq1: MultiPoly, q2: MultiPoly):
    """(c+Q1)^E * P with every X_i X_j replaced by -Q2/(c+Q1)."""
    n, K = P.nvars, P.field
    E = max((min(e[i], e[j]) for e in P.terms), default=0)
    out = MultiPoly.zero(n, K)
    for e, a in P.terms.items():
        k = min(e[i], e[j])
        rest = list(e)
        rest[i] -= k
        rest[j] -= k
        mono = MultiPoly({tuple(rest): a}, n, K)
        out = out + mono * (-q2) ** k * cq1 ** (E - k)
    return out, E


def quad1_zero(Q: MultiPoly, P: MultiPoly, i: int, j: int, *, budget: int = DEFAULT_BUDGET,
               slack: float = DEFAULT_SLACK, strict: bool = True) -> Quad1Result:
    """Zero z of Q with P(z) != 0 for Q = X_i X_j (c + Q1) + Q2."""
    K, n = Q.field, Q.nvars
    if P.nvars != n:
        raise ValueError("P and Q must share the variables")
    c, q1, q2 = _q_shape(Q, i, j)
    cq1 = q1 + c
    if not P:
        raise PreconditionError("P is the zero polynomial")
    witnesses: dict = {}
    if not q1:
        order = MonomialOrder.lex(n, [i, j])
        Pr, R = reduce_by_single(P, Q, order)
        witnesses["reduction"] = "single-divisor"
    else:
        Pr, _ = _eliminate_product(P, i, j, cq1, q2)
        witnesses["reduction"] = "substitution"
    witnesses["reduced_P"] = Pr.to_json()
    if not Pr:
        raise PreconditionError("P vanishes on every zero of Q: no z with Q(z) = 0, P(z) != 0")
    with_i = {e: a for e, a in Pr.terms.items() if e[i]}
    G2 = MultiPoly({e: a for e, a in Pr.terms.items() if not e[i]}, n, K)
    if not with_i:
        branch = "G1=0"
        Xj = MultiPoly.var(j, n, K)
        target = (G2 * Xj * cq1).drop_variable(i)
        w, _ = nonvanishing_point(target, budget=budget)
        full = list(w[:i]) + [K.zero] + list(w[i:])
        zi = -q2(full) / (full[j] * cq1(full))
        full[i] = zi
        z = tuple(full)
    else:
        branch = "G1!=0"
        k = min(e[i] for e in with_i)
        G1 = MultiPoly({e[:i] + (e[i] - k,) + e[i + 1:]: a for e, a in with_i.items()}, n, K)
        r = MultiPoly({e: a for e, a in G1.terms.items() if not e[i]}, n, K)
        others = [v for v in range(n) if v not in (i, j)]

        def squeeze(poly: MultiPoly) -> MultiPoly:
            return MultiPoly({tuple(e[v] for v in others): a for e, a in poly.terms.items()},
                             len(others), K)

        u, _ = nonvanishing_point(squeeze(r * cq1), budget=budget)

        def at(xi, xj):
            full = [K.zero] * n
            for v, val in zip(others, u):
                full[v] = val
            full[i], full[j] = xi, xj
            return full

        base = at(K.zero, K.zero)
        beta = -q2(base) / cq1(base)
        # coefficients of G1 in X_i and of G2 in X_j, evaluated at u
        g1 = {d: poly(base) for d, poly in G1.univariate(i).items()}
        g2 = {d: poly(base) for d, poly in G2.univariate(j).items()}
        d2 = max(g2, default=0)
        pbar: dict[int, object] = {}
        for d, a in g1.items():
            pbar[k + d2 + d] = pbar.get(k + d2 + d, K.zero) + a
        for m, a in g2.items():
            pbar[d2 - m] = pbar.get(d2 - m, K.zero) + a * beta ** m
        pbar = {d: a for d, a in pbar.items() if a}
        Pbar = MultiPoly({(d,): a for d, a in pbar.items()}, 1, K)
        witnesses["beta"] = K.format(beta)
        witnesses["P_bar"] = Pbar.to_json()
        _, (alpha,) = next(affine_points(K, 1, accept=lambda a: bool(a[0]) and bool(Pbar(a)),
                                         budget=budget))
        z = tuple(at(alpha, beta / alpha))
        witnesses["alpha"] = K.format(alpha)
    witnesses["branch"] = branch
    degP, degQ = P.degree, Q.degree
    claims = [
        check_claim("Q(z)=0", not Q(z)),
        check_claim("P(z)!=0", bool(P(z))),
        bound_claim("PQ_height", "PQ_height",
                    {"degPQ": degP + degQ, "degQ": degQ, "degP": degP, "HQ": _poly_H(Q)},
                    height_h(z, K), _table(K), slack=slack),
    ]
    cert = Certificate("quad1", {"z": vec_json(z, K), "branch": branch}, claims, witnesses)
    return Quad1Result(z, branch, _strict(cert, strict))


# ---------------------------------------------------------------------------
# small zero avoiding a hypersurface

@dataclass
class ZeroResult:
    z: tuple
    certificate: Certificate


def _nonsingular_in(FA: QuadForm):
    L = FA.N
    units = [tuple(1 if a == b else 0 for b in range(L)) for a in range(L)]

    def ok(x):
        return any(FA.bilinear(x, e) for e in units)

    return ok


def small_zero_avoiding(qs: QuadSpace, P: MultiPoly, *, budget: int | None = None,
                        slack: float | None = None, strict: bool = True) -> ZeroResult:
    """Nonzero z in V with F(z) = 0 and P(z) != 0, following the constructive proof."""
    K, F, V = qs.field, qs.F, qs.V
    budget = qs.budget if budget is None else budget
    slack = qs.slack if slack is None else slack
    table = _table(K)
    L, N = V.dim, V.N
    if P.nvars != N:
        raise ValueError("P must have one variable per coordinate")
    if vanishes_on_zeros(P, qs):
        raise PreconditionError("P vanishes on every zero of F in V")
    HF, HV = F.H, V.HH
    D = max(P.degree, 0)
    claims: list[Claim] = []
    witnesses: dict = {}
    rad = qs.radical
    if rad.dim and not _restricted_zero(P, rad.basis):
        pt = SubspaceSearch(rad, accept=lambda x: bool(P(x)), budget=budget).first()
        z = _ring_to_field(pt.x, K)
        witnesses["route"] = "radical"
        claims.append(bound_claim("radical point", "mho_1",
                                  {"r": qs.r, "lam": rad.dim, "D": max(D, 1), "HF": HF, "HV": HV},
                                  height_h(z, K), table, slack=slack, status=DIAGNOSTIC))
    else:
        witnesses["route"] = "quad1"
        A, prod, _, sieg_ok = siegel_reduce(V)
        A = [_ring_to_field(v, K) for v in A]
        claims.append(check_claim("siegel_for_V", sieg_ok, DIAGNOSTIC))
        FA = F.restrict(A)
        PA = restrict_to_basis(P, A)
        claims.append(bound_claim("ht_FA", "ht_FA", {"L": L, "HF": HF, "HV": HV}, FA.H, table,
                                  slack=slack, status=DIAGNOSTIC))
        claims.append(bound_claim("ht_PA", "ht_PA",
                                  {"L": L, "D": P.degree, "HP": _poly_H(P), "prod_h": prod},
                                  _poly_H(PA), table, slack=slack, status=DIAGNOSTIC))
        ns_bound = bound_evaluator("ns_x", {"L": L, "HFA": FA.H}, table)
        full = Subspace.full(K, L)
        pt = SubspaceSearch(full, FA.matrix, accept=_nonsingular_in(FA), budget=budget,
                            max_level=level_cap(ns_bound, K)).first()
        if pt is None:
            pt = SubspaceSearch(full, FA.matrix, accept=_nonsingular_in(FA),
                                budget=budget).first()
        x = _ring_to_field(pt.x, K)
        claims.append(bound_claim("nonsingular zero", "ns_x", {"L": L, "HFA": FA.H},
                                  height_h(x, K), table, slack=slack, status=DIAGNOSTIC))
        e = [tuple(K.one if a == b else K.zero for b in range(L)) for a in range(L)]
        u = next(v for v in e if FA.bilinear(x, v))
        y = tuple(FA(u) * a - 2 * FA.bilinear(x, u) * b for a, b in zip(x, u))
        plane = Subspace([x, y], K, L)
        U = orth_complement_in(plane, QuadSpace(full, FA))
        vs, _, _, _ = siegel_reduce(U) if U.dim else ([], None, None, True)
        vs = [_ring_to_field(v, K) for v in vs]
        B = [x, y] + vs  # columns of B
        Bcols = [[B[c][r] for c in range(L)] for r in range(L)]
        Qp = FA.poly.substitute_linear(Bcols)
        cval = 2 * FA.bilinear(x, y)
        c, q1, _ = _q_shape(Qp, 0, 1)
        assert c == cval and not q1, "change of basis did not give the hyperbolic shape"
        G = PA.substitute_linear(Bcols)
        res = quad1_zero(Qp, G, 0, 1, budget=budget, slack=slack, strict=False)
        claims.extend(Claim(f"quad1 {cl.name}", cl.kind, cl.passed, DIAGNOSTIC, cl.data)
                      for cl in res.certificate.claims)
        w = res.z
        Bw = [sum((Bcols[r][k] * w[k] for k in range(L)), K.zero) for r in range(L)]
        zraw = _combine(Bw, A, K)
        z = _primitive(zraw, K)
        witnesses.update({
            "siegel_basis": mat_json(A, K), "F_A": mat_json(FA.matrix, K),
            "P_A": PA.to_json(), "x": vec_json(x, K), "u": vec_json(u, K),
            "y": vec_json(y, K), "B_columns": mat_json(B, K), "Q": Qp.to_json(),
            "reduced": res.certificate.witnesses, "w": vec_json(w, K),
            "z_raw": vec_json(zraw, K), "quad1_branch": res.branch,
        })
    claims = [
        check_claim("z!=0", any(z)),
        check_claim("F(z)=0", not F(z)),
        check_claim("z in V", V.contains(z)),
        check_claim("P(z)!=0", bool(P(z))),
        bound_claim("z_bound_miss", "z_bound_miss", {"L": L, "D": D, "HF": HF, "HV": HV},
                    height_h(z, K), table, slack=slack),
    ] + claims
    cert = Certificate("solve", {"z": vec_json(z, K), "h": height_h(z, K).to_json()},
                       claims, witnesses)
    return ZeroResult(z, _strict(cert, strict))


# ---------------------------------------------------------------------------
# separating forms, independent zeros and flags

def separating_form(points: Sequence[Sequence], W: Subspace, *, budget: int = DEFAULT_BUDGET
                    ) -> MultiPoly:
    """Minimal linear form vanishing at the points but not identically on W."""
    K, N = W.field, W.N
    if points and rank(points, K) != len(points):
        raise PreconditionError("points must be linearly independent")
    span = Subspace.spanned_by(list(points), K, N) if points else Subspace.zero(K, N)
    if span.contains_subspace(W):
        raise PreconditionError("W lies in the span of the points")
    ann = Subspace.from_equations(list(points), K, N) if points else Subspace.full(K, N)

    def ok(l):
        return any(sum((K.from_ring(a) * w for a, w in zip(l, wv)), K.zero) for wv in W.basis)

    pt = SubspaceSearch(ann, accept=ok, budget=budget).first()
    return MultiPoly.linear(_ring_to_field(pt.x, K), K)


def _minimal_avoiding_zero(qs: QuadSpace, S: AvoidanceSystem, max_level: int, budget: int):
    return SubspaceSearch(qs.V, qs.F.matrix, accept=S.avoids, max_level=max_level,
                          budget=budget).first()


@dataclass
class ZerosResult:
    points: list
    certificate: Certificate
    forms: list


def independent_zeros(qs: QuadSpace, S: AvoidanceSystem, *, budget: int | None = None,
                      slack: float | None = None, strict: bool = True) -> ZerosResult:
    """m = omega + lambda linearly independent zeros of F in V outside Z_S."""
    K, F, V = qs.field, qs.F, qs.V
    budget = qs.budget if budget is None else budget
    slack = qs.slack if slack is None else slack
    table = _table(K)
    if not qs.is_isotropic:
        raise PreconditionError(
            f"no nontrivial zero below cap: F is anisotropic on V up to search level {qs.witt.search_cap}")
    m, L, M = qs.m, V.dim, S.M
    HF, HV = F.H, V.HH
    Sn = S
    points: list[tuple] = []
    forms: list[MultiPoly] = []
    claims: list[Claim] = []
    steps = []
    for n in range(1, m + 1):
        P, chosen = avoidance_polynomial(Sn, qs)
        z0 = small_zero_avoiding(qs, P, budget=budget, slack=slack, strict=False)
        claims.extend(Claim(f"x{n} seed {c.name}", c.kind, c.passed, DIAGNOSTIC, c.data)
                      for c in z0.certificate.claims)
        lvl = level_of(K.primitive(z0.z), K)
        pt = _minimal_avoiding_zero(qs, Sn, lvl, budget)
        x = _ring_to_field(pt.x, K)
        wit = S.witnesses(x)
        claims += [
            check_claim(f"F(x{n})=0", not F(x)),
            check_claim(f"x{n} in V", V.contains(x)),
            check_claim(f"x{n} avoids Z_S", wit is not None, witnesses=wit),
            bound_claim(f"x{n} miss_hyper_bnd", "4more", {"L": L, "M": M, "HF": HF, "HV": HV},
                        height_h(x, K), table, slack=slack),
        ]
        step = {"n": n, "chosen": chosen, "P_degree": P.degree, "seed": vec_json(z0.z, K),
                "x": vec_json(x, K)}
        points.append(x)
        if n < m:
            W = extend_to_max_isotropic(x, qs, m, budget=budget)
            l = separating_form(points, W, budget=budget)
            forms.append(l)
            Sn = Sn.plus(l)
            step["W"] = mat_json(W.basis, K)
            step["separating_form"] = l.to_json()
        steps.append(step)
    Hs = [height_H(x, K) for x in points]
    hs = [height_h(x, K) for x in points]
    claims.append(check_claim("rank = m", rank(points, K) == m, m=m))
    claims.append(check_claim("heights nondecreasing",
                              all(a <= b for a, b in zip(Hs, Hs[1:]))
                              and all(a <= b for a, b in zip(hs, hs[1:]))))
    cert = Certificate("zeros", {"points": mat_json(points, K), "m": m,
                                 "heights": [h.to_json() for h in hs]},
                       claims, {"steps": steps})
    return ZerosResult(points, _strict(cert, strict), forms)


@dataclass
class FlagsResult:
    points: list
    flags: list  # per n: list of k-dim subspaces, k = 1..m
    certificate: Certificate


def isotropic_flags(qs: QuadSpace, S: AvoidanceSystem, *, budget: int | None = None,
                    slack: float | None = None, strict: bool = True) -> FlagsResult:
    """Nested totally isotropic chains W^1_n < ... < W^m_n through each x_n."""
    K, F, V = qs.field, qs.F, qs.V
    budget = qs.budget if budget is None else budget
    slack = qs.slack if slack is None else slack
    table = _table(K)
    zr = independent_zeros(qs, S, budget=budget, slack=slack, strict=False)
    claims = list(zr.certificate.claims)
    m, L, N, M = qs.m, V.dim, V.N, S.M
    HF, HV = F.H, V.HH
    flags = []
    out_flags = []
    for n, x in enumerate(zr.points, start=1):
        Hx = height_H(x, K)
        if qs.radical.contains(x):
            Wm = extend_to_max_isotropic(x, qs, m, budget=budget)
        else:
            U = orth_complement_in(Subspace([x], K, N), qs)
            claims.append(bound_claim(f"U{n} ht_Un", "ht_Un",
                                      {"N": N, "HF": HF, "Hx": Hx, "HV": HV}, U.HH, table,
                                      slack=slack, status=DIAGNOSTIC))
            Wm = extend_to_max_isotropic(x, qs.sub(U), m, budget=budget)
            if m < L:
                claims.append(bound_claim(f"W'{n} ht_max_isot", "ht_max_isot",
                                          {"L": L, "m": m, "HF": HF, "HU": U.HH}, Wm.HH, table,
                                          slack=slack, status=DIAGNOSTIC))
            claims.append(bound_claim(f"W{n} 5more", "5more", {"N": N, "Hx": Hx, "HW": Wm.HH},
                                      Wm.HH, table, slack=slack, status=DIAGNOSTIC))
        claims.append(bound_claim(f"W{n} cor_bnd", "cor_bnd",
                                  {"L": L, "M": M, "N": N, "m": m, "HF": HF, "HV": HV},
                                  Wm.HH, table, slack=slack))
        basis, _, _, _ = siegel_reduce(Wm)
        chain = [x]
        for v in basis:
            fv = _ring_to_field(v, K)
            if rank(chain + [fv], K) > len(chain):
                chain.append(fv)
        subs = [Subspace(chain[:k], K, N) for k in range(1, m + 1)]
        for k, Wk in enumerate(subs, start=1):
            gram = F.gram(Wk.basis)
            claims += [
                check_claim(f"W{n}^{k} totally isotropic", not any(g for r in gram for g in r)),
                check_claim(f"W{n}^{k} dim", Wk.dim == k),
                check_claim(f"W{n}^{k} in V", V.contains_subspace(Wk)),
                check_claim(f"W{n}^{k} contains x{n}", Wk.contains(x)),
                check_claim(f"W{n}^{k} not in Z_S", S.avoids(x), witness=vec_json(x, K)),
                bound_claim(f"W{n}^{k} cor_bnd_1", "cor_bnd_1",
                            {"L": L, "M": M, "N": N, "m": m, "k": k, "HF": HF, "HV": HV},
                            Wk.HH, table, slack=slack),
            ]
            if k > 1:
                claims.append(check_claim(f"W{n}^{k - 1} < W{n}^{k}",
                                          Wk.contains_subspace(subs[k - 2])))
        flags.append(subs)
        out_flags.append([mat_json(W.basis, K) for W in subs])
    cert = Certificate("flags", {"points": mat_json(zr.points, K), "m": m, "flags": out_flags},
                       claims, zr.certificate.witnesses)
    return FlagsResult(zr.points, flags, _strict(cert, strict))


# ---------------------------------------------------------------------------
# appendix results

def basis_outside(V: Subspace, S: AvoidanceSystem, *, budget: int = DEFAULT_BUDGET,
                  slack: float = DEFAULT_SLACK, strict: bool = True) -> ZerosResult:
    """Basis of V outside Z_S with nondecreasing heights."""
    K, L, M = V.field, V.dim, S.M
    table = _table(K)
    for i, fam in enumerate(S.families):
        if all(_restricted_zero(P, V.basis) for P in fam):
            raise PreconditionError(f"V lies in the zero set of S_{i + 1}")
    Sn = S
    pts: list[tuple] = []
    forms = []
    claims: list[Claim] = []
    for n in range(1, L + 1):
        pt = SubspaceSearch(V, accept=Sn.avoids, budget=budget).first()
        x = _ring_to_field(pt.x, K)
        wit = S.witnesses(x)
        claims += [
            check_claim(f"x{n} in V", V.contains(x)),
            check_claim(f"x{n} avoids Z_S", wit is not None, witnesses=wit),
            bound_claim(f"x{n} gen_bnd_1", "gen_bnd_1", {"L": L, "M": M, "HV": V.HH},
                        height_h(x, K), table, slack=slack),
        ]
        pts.append(x)
        if n < L:
            l = separating_form(pts, V, budget=budget)
            forms.append(l)
            Sn = Sn.plus(l)
    hs = [height_h(x, K) for x in pts]
    claims.append(check_claim("basis of V", rank(pts, K) == L))
    claims.append(check_claim("heights nondecreasing", all(a <= b for a, b in zip(hs, hs[1:]))))
    cert = Certificate("basis-outside", {"basis": mat_json(pts, K),
                                         "heights": [h.to_json() for h in hs]},
                       claims, {"separating_forms": [l.to_json() for l in forms]})
    return ZerosResult(pts, _strict(cert, strict), forms)


def siegel_basis(V: Subspace, *, slack: float = DEFAULT_SLACK, strict: bool = True):
    """Basis of V with prod h(x_i) <= C_K(L) E_K(L)^(1-delta) HH(V)."""
    K = V.field
    basis, prod, _, _ = siegel_reduce(V, slack=slack)
    basis = [_ring_to_field(v, K) for v in basis]
    claims = [
        check_claim("basis of V", len(basis) == V.dim
                    and (not basis or Subspace(basis, K, V.N) == V)),
        bound_claim("siegel_for_V", "siegel_for_V", {"L": V.dim, "HV": V.HH}, prod,
                    _table(K), slack=slack),
    ]
    cert = Certificate("siegel", {"basis": mat_json(basis, K), "product": prod.to_json()},
                       claims)
    return basis, _strict(cert, strict)


def orth_basis_ff(V: Subspace, F: QuadForm, *, budget: int = DEFAULT_BUDGET,
                  slack: float = DEFAULT_SLACK, strict: bool = True):
    """Pairwise F-orthogonal basis of V over F_p(t) with small height product."""
    K = V.field
    if K.kind != "Fq_t":
        raise PreconditionError("orth_basis_ff needs a rational function field F_p(t)")
    W = V
    basis: list[tuple] = []
    while W.dim:
        gram = F.gram(W.basis)
        if not any(g for r in gram for g in r):
            rest, _, _, _ = siegel_reduce(W)
            basis.extend(_ring_to_field(v, K) for v in rest)
            break
        pt = SubspaceSearch(W, accept=lambda x: bool(F(_ring_to_field(x, K))),
                            budget=budget).first()
        x = _ring_to_field(pt.x, K)
        basis.append(x)
        W = orth_complement_in(Subspace([x], K, V.N), QuadSpace(W, F, budget=budget))
    prod = _zero_height(K)
    for x in basis:
        prod = prod * height_H(x, K)
    orth = all(not F.bilinear(a, b) for i, a in enumerate(basis) for b in basis[i + 1:])
    claims = [
        check_claim("basis of V", Subspace(basis, K, V.N) == V),
        check_claim("pairwise orthogonal", orth),
        bound_claim("orth_siegel", "orth_siegel", {"L": V.dim, "HF": F.H, "HV": V.H}, prod,
                    _table(K), slack=slack),
    ]
    cert = Certificate("ff-orth", {"basis": mat_json(basis, K), "product": prod.to_json()},
                       claims)
    return basis, _strict(cert, strict)
