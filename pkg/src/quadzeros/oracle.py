"""Brute-force oracle and independent certificate checker.

Nothing here calls the pipeline code.  Problems are read from their JSON
form, scalars are re-parsed, heights and bounds are recomputed with plain
integers, hand-rolled F_p[t] arithmetic and mpmath at 50 digits.

Oracle order: nondecreasing H, then lexicographic order of the normalized
primitive representative (first nonzero coordinate positive over Q, monic
over F_p(t)).  Over F_p(t) coordinates compare by (degree, coefficients from
the top).
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterator, Sequence

import mpmath
import numpy as np
import sympy as sp

from .errors import SchemaError, SearchBudgetExceeded

ORACLE_BUDGET = 5_000_000
DPS = 50


# ---------------------------------------------------------------------------
# F_p[t] as coefficient tuples, lowest degree first

def _trim(a, p):
    a = [int(c) % p for c in a]
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def _padd(a, b, p):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def _pneg(a, p):
    return _trim([-c for c in a], p)


def _psub(a, b, p):
    return _padd(a, _pneg(b, p), p)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out, p)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError
    a = list(a)
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] * inv % p
        q[k] = f
        for i, y in enumerate(b):
            a[i + k] = (a[i + k] - f * y) % p
        a = list(_trim(a, p))
    return _trim(q, p), _trim(a, p)


def _pmonic(a, p):
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return _trim([c * inv for c in a], p)


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return _pmonic(a, p)


def _pdeg(a) -> int:
    return len(a) - 1


def _pkey(a) -> tuple:
    return (len(a), tuple(reversed(a)))


# ---------------------------------------------------------------------------
# the two rings behind one small interface

class _Ring:
    """Ring of integers Z (kind Q) or F_p[t] (kind Fq_t), fraction field scalars."""

    def __init__(self, desc: dict):
        kind = desc.get("kind")
        if kind == "Q":
            self.kind, self.p = "Q", None
        elif kind == "Fq_t":
            p = desc.get("q")
            if not isinstance(p, int) or p < 3 or p % 2 == 0 or not sp.isprime(p):
                raise SchemaError("oracle: q must be an odd prime")
            self.kind, self.p = "Fq_t", p
        else:
            raise SchemaError(f"oracle: unsupported field {desc!r}")
        self.zero = 0 if self.kind == "Q" else ()
        self.one = 1 if self.kind == "Q" else (1,)

    # ring operations
    def add(self, a, b):
        return a + b if self.p is None else _padd(a, b, self.p)

    def sub(self, a, b):
        return a - b if self.p is None else _psub(a, b, self.p)

    def mul(self, a, b):
        return a * b if self.p is None else _pmul(a, b, self.p)

    @staticmethod
    def nz(a) -> bool:
        return bool(a)

    def gcd(self, a, b):
        return math.gcd(a, b) if self.p is None else _pgcd(a, b, self.p)

    def lcm(self, a, b):
        if self.p is None:
            return a * b // math.gcd(a, b)
        return _pdivmod(_pmul(a, b, self.p), _pgcd(a, b, self.p), self.p)[0]

    def exquo(self, a, b):
        if self.p is None:
            return a // b
        q, r = _pdivmod(a, b, self.p)
        assert not r
        return q

    # scalars: Fraction over Q, (num, den) over F_p(t)
    def parse(self, text):
        if isinstance(text, int):
            text = str(text)
        if self.p is None:
            try:
                return Fraction(text.replace(" ", ""))
            except (ValueError, ZeroDivisionError):
                e = sp.nsimplify(sp.sympify(text.replace("^", "**")))
                if not e.is_Rational:
                    raise SchemaError(f"oracle: bad rational scalar {text!r}")
                return Fraction(int(e.p), int(e.q))
        t = sp.Symbol("t")
        e = sp.together(sp.sympify(text.replace("^", "**"), locals={"t": t}))
        num, den = sp.fraction(e)
        return self._poly(num, t), self._poly(den, t)

    def _poly(self, expr, t):
        P = sp.Poly(sp.expand(expr), t, domain=sp.QQ)
        out = []
        for c in reversed(P.all_coeffs()):
            c = sp.Rational(c)
            out.append(int(c.p) * pow(int(c.q), -1, self.p))
        return _trim(out, self.p)

    def scalar_zero(self, x) -> bool:
        return x == 0 if self.p is None else not x[0]

    def den(self, x):
        return x.denominator if self.p is None else x[1]

    def num(self, x):
        return x.numerator if self.p is None else x[0]

    def clear(self, xs) -> list:
        """Ring vector proportional to the scalar vector xs."""
        d = self.one
        for x in xs:
            d = self.lcm(d, self.den(x))
        return [self.mul(self.num(x), self.exquo(d, self.den(x))) for x in xs]

    def primitive(self, ys):
        g = self.zero
        for y in ys:
            g = self.gcd(g, y)
        if not self.nz(g):
            return None
        if self.p is None:
            g = abs(g)
            out = [y // g for y in ys]
            first = next(y for y in out if y)
            return [-y for y in out] if first < 0 else out
        out = [self.exquo(y, g) for y in ys]
        lead = next(y for y in out if y)[-1]
        inv = pow(lead, -1, self.p)
        return [_trim([c * inv for c in y], self.p) for y in out]

    def size(self, y):
        return abs(y) if self.p is None else _pdeg(y)

    def key(self, y):
        return y if self.p is None else _pkey(y)

    # heights, returned as {"sq": ...} / {"exp": ...} dictionaries
    def H(self, xs) -> dict:
        y = self.primitive(self.clear(xs))
        if y is None:
            return self.unit_height()
        if self.p is None:
            return {"sq": str(max(abs(a) for a in y) ** 2)}
        return {"exp": str(max(_pdeg(a) for a in y))}

    def HH(self, xs) -> dict:
        if self.p is not None:
            return self.H(xs)
        y = self.primitive(self.clear(xs))
        if y is None:
            return self.unit_height()
        return {"sq": str(sum(a * a for a in y))}

    def h(self, xs) -> dict:
        one = Fraction(1) if self.p is None else ((1,), (1,))
        return self.H([one] + list(xs))

    def unit_height(self) -> dict:
        return {"sq": "1"} if self.p is None else {"exp": "0"}

    def det(self, M):
        n = len(M)
        if n == 0:
            return self.one
        if n == 1:
            return M[0][0]
        out = self.zero
        for j in range(n):
            if not self.nz(M[0][j]):
                continue
            minor = [row[:j] + row[j + 1:] for row in M[1:]]
            term = self.mul(M[0][j], self.det(minor))
            out = self.add(out, term) if j % 2 == 0 else self.sub(out, term)
        return out

    def rank(self, rows) -> int:
        """Rank by fraction-free elimination on ring rows."""
        rows = [list(r) for r in rows]
        rk, col = 0, 0
        ncols = len(rows[0]) if rows else 0
        while rk < len(rows) and col < ncols:
            piv = next((i for i in range(rk, len(rows)) if self.nz(rows[i][col])), None)
            if piv is None:
                col += 1
                continue
            rows[rk], rows[piv] = rows[piv], rows[rk]
            a = rows[rk][col]
            for i in range(rk + 1, len(rows)):
                b = rows[i][col]
                if self.nz(b):
                    rows[i] = [self.sub(self.mul(x, a), self.mul(y, b))
                               for x, y in zip(rows[i], rows[rk])]
                    if self.p is None:
                        g = 0
                        for x in rows[i]:
                            g = math.gcd(g, x)
                        if g > 1:
                            rows[i] = [x // g for x in rows[i]]
            rk += 1
            col += 1
        return rk

    def plucker(self, basis_rows) -> list:
        L = len(basis_rows)
        if L == 0:
            return [self.one]
        N = len(basis_rows[0])
        return [self.det([[r[c] for c in cs] for r in basis_rows])
                for cs in combinations(range(N), L)]

    def subspace_heights(self, basis) -> tuple[dict, dict]:
        rows = [self.clear(v) for v in basis]
        pl = self.plucker(rows)
        y = self.primitive(pl)
        if y is None:
            raise ValueError("rank-deficient basis")
        if self.p is None:
            return ({"sq": str(max(abs(a) for a in y) ** 2)},
                    {"sq": str(sum(a * a for a in y))})
        e = {"exp": str(max(_pdeg(a) for a in y))}
        return e, e


# ---------------------------------------------------------------------------
# oracle view of a problem

_XTOK = re.compile(r"X(\d+)")


def _poly_text(text: str, N: int) -> str:
    s = text.replace("^", "**")
    s = re.sub(r"(X\d+|\)|\bt\b|\d)\s*(?=X|\(|t\b)", r"\1*", s)
    return s


class OracleProblem:
    """Problem data re-read from JSON with the oracle's own arithmetic."""

    def __init__(self, obj: dict):
        if not isinstance(obj, dict):
            raise SchemaError("oracle: problem must be an object")
        self.obj = obj
        self.R = R = _Ring(obj.get("field", {"kind": "Q"}))
        self.N = N = int(obj["N"])
        self.F = None
        if "F" in obj:
            self.F = [[R.parse(a) for a in row] for row in obj["F"]]
            flat = R.clear([a for row in self.F for a in row])
            self.Fr = [flat[i * N:(i + 1) * N] for i in range(N)]
        if "V" in obj:
            self.V = [[R.parse(a) for a in v] for v in obj["V"]]
        else:
            one = Fraction(1) if R.p is None else ((1,), (1,))
            zero = Fraction(0) if R.p is None else ((), (1,))
            self.V = [[one if i == j else zero for j in range(N)] for i in range(N)]
        self.Vr = [R.clear(v) for v in self.V]
        self.L = R.rank(self.Vr)
        self.equations = self._equations()
        self.S = [[self._poly(P) for P in fam] for fam in obj.get("S", [])]

    # V = {x : E x = 0} through the (L+1)-minors of [basis; x]
    def _equations(self):
        R, N, L = self.R, self.N, self.L
        eqs = []
        for cs in combinations(range(N), L + 1):
            row = [R.zero] * N
            for pos, c in enumerate(cs):
                rest = [k for k in cs if k != c]
                m = R.det([[v[k] for k in rest] for v in self.Vr])
                sign_pos = (L + pos) % 2 == 0
                row[c] = m if sign_pos else R.sub(R.zero, m)
            if any(R.nz(a) for a in row):
                eqs.append(row)
        return eqs

    def _poly(self, P):
        """List of (exponents, ring coefficient) for a scaled copy of P."""
        R, N = self.R, self.N
        if isinstance(P, str):
            xs = sp.symbols(f"X1:{N + 1}")
            t = sp.Symbol("t")
            loc = {f"X{i + 1}": x for i, x in enumerate(xs)}
            loc["t"] = t
            e = sp.together(sp.sympify(_poly_text(P, N), locals=loc))
            num, _ = sp.fraction(e)
            poly = sp.Poly(sp.expand(num), *xs)
            terms = []
            for mono, c in poly.terms():
                terms.append((tuple(mono), R.parse(str(c))))
        else:
            terms = [(tuple(e), R.parse(c)) for e, c in P]
        coeffs = R.clear([c for _, c in terms])
        out = [(e, c) for (e, _), c in zip(terms, coeffs) if R.nz(c)]
        return out

    def degree(self, P) -> int:
        return max(sum(e) for e, _ in P)

    @property
    def M(self) -> int:
        return sum(max(self.degree(P) for P in fam) for fam in self.S)

    # evaluation at ring vectors
    def peval(self, P, x):
        R = self.R
        total = R.zero
        for e, c in P:
            term = c
            for xi, k in zip(x, e):
                for _ in range(k):
                    term = R.mul(term, xi)
            total = R.add(total, term)
        return total

    def form(self, x, y):
        R = self.R
        total = R.zero
        for i in range(self.N):
            if not R.nz(x[i]):
                continue
            for j in range(self.N):
                if R.nz(y[j]) and R.nz(self.Fr[i][j]):
                    total = R.add(total, R.mul(R.mul(self.Fr[i][j], x[i]), y[j]))
        return total

    def in_V(self, x) -> bool:
        R = self.R
        for row in self.equations:
            acc = R.zero
            for a, b in zip(row, x):
                if R.nz(a) and R.nz(b):
                    acc = R.add(acc, R.mul(a, b))
            if R.nz(acc):
                return False
        return True

    def avoid_witnesses(self, x):
        out = []
        for fam in self.S:
            k = next((k for k, P in enumerate(fam) if self.R.nz(self.peval(P, x))), None)
            if k is None:
                return None
            out.append(k)
        return out

    def nonsingular(self, x) -> bool:
        return any(self.R.nz(self.form(x, v)) for v in self.Vr)

    def ring_point(self, texts) -> list:
        return self.R.clear([self.R.parse(a) for a in texts])


def _as_problem(problem) -> OracleProblem:
    if isinstance(problem, OracleProblem):
        return problem
    if isinstance(problem, dict):
        return OracleProblem(problem)
    if hasattr(problem, "to_json"):
        return OracleProblem(json.loads(json.dumps(problem.to_json())))
    raise TypeError("expected a problem object or its JSON form")


# ---------------------------------------------------------------------------
# enumeration

@dataclass
class EnumConfig:
    """Projective points of K^n with log H <= cap."""

    field: dict
    n: int
    cap: float
    budget: int = ORACLE_BUDGET


def _q_shell(n: int, H: int) -> Iterator[np.ndarray]:
    """Chunks (in lex order) of integer vectors with max |x_i| = H."""
    rng = np.arange(-H, H + 1, dtype=np.int64)
    if n == 1:
        yield np.array([[H]], dtype=np.int64)
        return
    grid = np.stack(np.meshgrid(*([rng] * (n - 1)), indexing="ij"), -1).reshape(-1, n - 1)
    for a in range(0, H + 1):
        col = np.full((grid.shape[0], 1), a, dtype=np.int64)
        X = np.hstack([col, grid])
        yield X


def _q_filter(X: np.ndarray, H: int) -> np.ndarray:
    absX = np.abs(X)
    keep = absX.max(axis=1) == H
    nzpos = np.argmax(X != 0, axis=1)
    keep &= X[np.arange(len(X)), nzpos] > 0
    keep &= np.gcd.reduce(absX, axis=1) == 1
    return X[keep]


_FF_CHUNK = 1 << 18


def _np_conv(A: np.ndarray, B) -> np.ndarray:
    """Row-wise product of polynomials: A is (M, a); B is (M, b) or a coefficient list."""
    B = np.asarray(B, dtype=np.int64)
    if B.ndim == 1:
        B = np.broadcast_to(B, (A.shape[0], len(B)))
    a, b = A.shape[1], B.shape[1]
    if a == 0 or b == 0:
        return np.zeros((A.shape[0], 1), dtype=np.int64)
    out = np.zeros((A.shape[0], a + b - 1), dtype=np.int64)
    for i in range(a):
        out[:, i:i + b] += A[:, i:i + 1] * B
    return out


def _np_acc(acc, term):
    if acc is None:
        return term
    if acc.shape[1] < term.shape[1]:
        acc, term = term, acc
    acc = acc.copy()
    acc[:, :term.shape[1]] += term
    return acc


def _ff_candidates(p: int, n: int, k: int) -> Iterator[np.ndarray]:
    """Chunks (M, n, k+1) of normalized vectors whose largest degree is k."""
    width = n * (k + 1)
    total = p ** width
    powers = p ** np.arange(width - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, _FF_CHUNK):
        idx = np.arange(start, min(start + _FF_CHUNK, total), dtype=np.int64)
        X = ((idx[:, None] // powers[None, :]) % p).reshape(-1, n, k + 1)
        nz = X != 0
        has = nz.any(axis=2)
        deg = np.where(has, k - np.argmax(nz[:, :, ::-1], axis=2), -1)
        keep = deg.max(axis=1) == k
        first = np.argmax(has, axis=1)
        rows = np.arange(len(X))
        lead = X[rows, first, np.maximum(deg[rows, first], 0)]
        keep &= has.any(axis=1) & (lead == 1)
        if keep.any():
            yield X[keep]


def _ff_finish(X: np.ndarray, p: int) -> list[tuple]:
    out = []
    for row in X:
        vec = tuple(_trim(list(c), p) for c in row)
        g = ()
        for a in vec:
            g = _pgcd(g, a, p)
        if g == (1,):
            out.append(vec)
    return out


def _level_count(kind: str, p, n: int, s: int) -> int:
    if kind == "Q":
        return (2 * s + 1) ** n
    return p ** ((s + 1) * n)


def _levels(R: _Ring, cap: float) -> range:
    if R.p is None:
        Hmax = int(mpmath.floor(mpmath.exp(mpmath.mpf(cap)) * (1 + mpmath.mpf(10) ** -12)))
        return range(1, max(Hmax, 0) + 1)
    return range(0, int(math.floor(cap + 1e-12)) + 1)


def enumerate_points(cfg: EnumConfig) -> Iterator[tuple]:
    """Every projective point of K^n with log H <= cap, exactly once, in oracle order.

    Over F_p(t) points are tuples of coefficient tuples (lowest degree first).
    """
    R = _Ring(cfg.field)
    yield from _enumerate(R, cfg.n, cfg.cap, cfg.budget)


def _enumerate(R: _Ring, n: int, cap: float, budget: int, pre=None) -> Iterator[tuple]:
    spent = 0
    for s in _levels(R, cap):
        spent += _level_count(R.kind, R.p, n, s)
        if spent > budget:
            raise SearchBudgetExceeded(
                f"oracle enumeration needs more than {budget} candidates (level {s})")
        if R.p is None:
            for X in _q_shell(n, s):
                X = _q_filter(X, s)
                if pre is not None and len(X):
                    X = X[pre(X)]
                for row in X:
                    yield tuple(int(a) for a in row)
        else:
            shell = []
            for X in _ff_candidates(R.p, n, s):
                if pre is not None:
                    X = X[pre(X)]
                shell.extend(_ff_finish(X, R.p))
            shell.sort(key=lambda v: tuple(_pkey(a) for a in v))
            yield from shell


def _np_prefilter(P: OracleProblem):
    """Vectorized test of F(x) = 0 and x in V on candidate arrays."""
    R = P.R
    if R.p is None:
        big = max([abs(a) for r in (P.Fr if P.F is not None else []) for a in r]
                  + [abs(a) for r in P.equations for a in r] + [1])
        if big > 2 ** 40:
            return None
        Fi = None if P.F is None else np.array(P.Fr, dtype=np.int64)
        Ei = np.array(P.equations, dtype=np.int64) if P.equations else None

        def pre_q(X):
            keep = np.ones(len(X), dtype=bool)
            if Ei is not None:
                keep &= ~(X @ Ei.T).any(axis=1)
            if Fi is not None:
                keep &= np.einsum("ij,jk,ik->i", X, Fi, X) == 0
            return keep

        return pre_q
    p, N = R.p, P.N

    def pre_ff(X):
        keep = np.ones(len(X), dtype=bool)
        for row in P.equations:
            acc = None
            for c in range(N):
                if row[c]:
                    acc = _np_acc(acc, _np_conv(X[:, c, :], list(row[c])))
            if acc is not None:
                keep &= ~((acc % p) != 0).any(axis=1)
        if P.F is not None:
            total = None
            for i in range(N):
                y = None
                for j in range(N):
                    if P.Fr[i][j]:
                        y = _np_acc(y, _np_conv(X[:, j, :], list(P.Fr[i][j])))
                if y is not None:
                    total = _np_acc(total, _np_conv(X[:, i, :], y % p))
            if total is not None:
                keep &= ~((total % p) != 0).any(axis=1)
        return keep

    return pre_ff


def _points_of(P: OracleProblem, cap: float, budget: int, want_zero: bool) -> Iterator[list]:
    """Ring points of V (zeros of F when want_zero) in oracle order."""
    R = P.R
    pre = _np_prefilter(P) if want_zero else None
    for x in _enumerate(R, P.N, cap, budget, pre=pre):
        x = list(x)
        if pre is None:
            if not P.in_V(x):
                continue
            if want_zero and R.nz(P.form(x, x)):
                continue
        yield x


def _fmt(R: _Ring, x) -> tuple:
    if R.p is None:
        return tuple(x)
    return tuple(tuple(a) for a in x)


def minimal_zero(problem, cap: float, *, budget: int = ORACLE_BUDGET):
    """First z in V with F(z) = 0 outside Z_S in oracle order, or None below the cap."""
    P = _as_problem(problem)
    for x in _points_of(P, cap, budget, True):
        if P.avoid_witnesses(x) is not None:
            return _fmt(P.R, x)
    return None


def minimal_nonsingular_zero(problem, cap: float, *, budget: int = ORACLE_BUDGET):
    P = _as_problem(problem)
    for x in _points_of(P, cap, budget, True):
        if P.nonsingular(x):
            return _fmt(P.R, x)
    return None


def isotropic_points(problem, cap: float, *, budget: int = ORACLE_BUDGET) -> list:
    P = _as_problem(problem)
    return [_fmt(P.R, x) for x in _points_of(P, cap, budget, True)]


def minimal_isotropic_subspace(problem, l: int, cap: float, *, budget: int = ORACLE_BUDGET):
    """Totally isotropic l-dimensional subspace of V of least height among those
    spanned by points below the cap, as (basis, log H); None if there is none."""
    P = _as_problem(problem)
    R = P.R
    if R.p is None:
        raise SchemaError("minimal_isotropic_subspace is implemented over F_p(t) only")
    pts = [list(x) for x in _points_of(P, cap, budget, True)]
    best = None
    steps = 0

    def extend(chosen, start):
        nonlocal best, steps
        if len(chosen) == l:
            H = _ring_subspace_log_height(R, chosen)
            if best is None or H < best[1]:
                best = ([_fmt(R, c) for c in chosen], H)
            return
        for i in range(start, len(pts)):
            steps += 1
            if steps > budget:
                raise SearchBudgetExceeded("oracle subspace search exceeded its budget")
            x = pts[i]
            if any(R.nz(P.form(x, c)) for c in chosen):
                continue
            if R.rank(chosen + [x]) <= len(chosen):
                continue
            extend(chosen + [x], i + 1)

    extend([], 0)
    return best


def _ring_subspace_log_height(R: _Ring, rows) -> int:
    y = R.primitive(R.plucker(rows))
    return max(_pdeg(a) for a in y)


# ---------------------------------------------------------------------------
# bounds, recomputed in mpmath

class _Consts:
    def __init__(self, R: _Ring):
        self.nf = R.p is None
        self.q = R.p
        self.delta = 1 if self.nf else 0

    def lB(self, j):
        if j == 0:
            return mpmath.mpf(0)
        return (mpmath.log(2) - mpmath.log(mpmath.pi) / 2
                + mpmath.loggamma(mpmath.mpf(j) / 2 + 1) / j)

    def lC(self, l):
        return mpmath.mpf(0)

    def lE(self, l):
        return mpmath.mpf(0)

    def lA(self, j):
        if self.nf:
            return mpmath.log(j) + mpmath.log(2) / 2 if j >= 2 else mpmath.mpf(0)
        q = self.q
        if j < q:
            return mpmath.mpf(0)
        n = q + 1
        return (mpmath.mpf(n - 1) / 2 * ((j - q + 2) * mpmath.sqrt(n)) ** (mpmath.mpf(1) / (n - 1))
                + (n - 1) * mpmath.sqrt(n))

    def lT(self, l, j):
        if self.nf:
            return (3 * mpmath.log(3) + mpmath.mpf(21 * l - 21) / 2 * mpmath.log(2)
                    + mpmath.mpf(27 * l + 51) / 2 * mpmath.log(l)
                    + max(l, 9) * self.lB(l - 1) + 3 * self.lA(j + 2) + 2 * self.lA(2 * j))
        return 3 * self.lA(j + 2) + 2 * self.lA(2 * j)

    def la(self, L, N, m):
        if not self.nf:
            return mpmath.mpf(0)
        k = max(L - m - 1, 0)
        return (2 * m + 1) * k * mpmath.log(2) + 2 * k * self.lB(k) + 2 * mpmath.log(N)

    def lT1(self, L, M, N, m):
        return self.la(L, N, m) + 2 * self.lT(L, M + 1)


def _hlog(h) -> mpmath.mpf:
    if isinstance(h, dict):
        if "exp" in h:
            return mpmath.mpf(int(h["exp"]))
        return mpmath.log(mpmath.mpf(int(h["sq"]))) / 2
    return mpmath.mpf(h)


def oracle_bound(kind: str, params: dict, field: dict) -> mpmath.mpf:
    """log of the right-hand side of the named bound."""
    with mpmath.workdps(DPS):
        return _oracle_bound(kind, params, _Consts(_Ring(field)))


def _oracle_bound(kind, p, c: _Consts):
    g = lambda k: _hlog(p[k])  # noqa: E731
    d = c.delta
    ln = mpmath.log
    fr = lambda a, b: mpmath.mpf(a) / b  # noqa: E731
    if kind in ("miss_hyper_bnd", "4more"):
        L = p["L"]
        return c.lT(L, p["M"] + 1) + fr(9 * L + 11, 2) * g("HF") + (9 * L + 12) * g("HV")
    if kind == "z_bound_miss":
        L = p["L"]
        return c.lT(L, p["D"]) + fr(9 * L + 11, 2) * g("HF") + (9 * L + 12) * g("HV")
    if kind == "cor_bnd":
        L, m = p["L"], p["m"]
        return (c.lT1(L, p["M"], p["N"], m) + (10 * L - m + 11) * g("HF")
                + (18 * L + 25) * g("HV"))
    if kind == "cor_bnd_1":
        L, M, N, m, k = p["L"], p["M"], p["N"], p["m"], p["k"]
        return (fr(d * k, 2) * ln(N) + c.lC(m) + (1 - d) * c.lE(m) + c.lT(L, M + 1)
                + c.lT1(L, M, N, m) + fr(29 * L + 33 - 2 * m, 2) * g("HF")
                + (27 * L + 37) * g("HV"))
    if kind == "gen_bnd_1":
        L = p["L"]
        return d * ln(L) + (1 - d) * c.lE(L) + c.lA(p["M"] + 1) + c.lC(L) + g("HV")
    if kind == "PQ_height":
        return (1 + p["degQ"]) * c.lA(p["degPQ"]) + 2 * c.lA(2 * p["degP"]) + g("HQ")
    if kind == "siegel_for_V":
        return c.lC(p["L"]) + (1 - d) * c.lE(p["L"]) + g("HV")
    if kind == "orth_siegel":
        L = p["L"]
        return fr(L * L + L - 2, 4) * c.lC(L) + fr(L * (L + 1), 2) * g("HF") + L * g("HV")
    if kind == "nonvanish":
        return c.lA(p["D"])
    if kind == "iso_bound":
        return fr(p["L"] - p["l"], 2) * g("HF") + g("HV")
    if kind == "smallzero2":
        return fr(p["L"] - 1, 2) * g("HF") + g("HV")
    if kind in ("sing_height", "fnct_rad_ht"):
        r = p["r"]
        head = r * c.lB(r) if (c.nf and r) else mpmath.mpf(0)
        return head + fr(r, 2) * g("HF") + g("HV")
    if kind == "mho_1":
        r = p["r"]
        head = r * c.lB(r) if (c.nf and r) else mpmath.mpf(0)
        return (head + ln(p["lam"]) + c.lA(p["D"]) + c.lC(p["lam"]) + fr(r, 2) * g("HF")
                + g("HV"))
    if kind == "ns_x":
        L = p["L"]
        if not c.nf:
            return fr(L - 1, 2) * g("HFA")
        return (fr(3 * (L - 1), 2) * ln(2) + fr(L - 1, 2) * ln(L) + c.lB(L - 1)
                + fr(L - 1, 2) * g("HFA"))
    if kind == "ht_FA":
        L = p["L"]
        head = 2 * c.lC(L) + (2 * ln(L) if c.nf else 2 * c.lE(L))
        return head + g("HF") + 2 * g("HV")
    if kind == "ht_PA":
        return d * p["D"] * ln(p["L"]) + g("HP") + p["D"] * g("prod_h")
    if kind == "ht_Un":
        return fr(3 * d, 2) * ln(p["N"]) + g("HF") + g("Hx") + g("HV")
    if kind == "ht_max_isot":
        k = p["L"] - p["m"] - 1
        if c.nf:
            head = k * ((2 * p["m"] + 1) * ln(2) + 2 * c.lB(k) + g("HF")) if k else 0
        else:
            head = k * g("HF")
        return head + g("HU")
    if kind == "5more":
        return fr(d, 2) * ln(p["N"]) + g("Hx") + g("HW")
    if kind == "x_bound":
        if c.nf:
            return ln(2 * mpmath.sqrt(2)) + 2 * c.lB(1) + g("HF") / 2 + g("HH")
        return g("HF") / 2 + g("HH")
    if kind == "y_bound":
        lG = (1 - d) * c.lE(2) + c.lA(2) + c.lC(2)
        if c.nf:
            head = ln(24 * mpmath.sqrt(2)) + 2 * ln(p["N"]) + 2 * (c.lB(1) + lG)
        else:
            head = ln(4) + 2 * lG
        return head + fr(3, 2) * g("HF") + 3 * g("HH")
    if kind == "z_bound":
        return ln(2) + (1 - d) * c.lE(2) + c.lA(2) + c.lC(2) + g("HH")
    if kind == "ffs1":
        return fr(p["L"] - p["l"], 2) * g("HF") + g("HV")
    if kind == "ffs2":
        return (fr(p["L"] - p["l"], 2) * g("HF") + g("HV")) / p["l"]
    raise KeyError(kind)


# ---------------------------------------------------------------------------
# certification

@dataclass
class Report:
    items: list = dc_field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.items.append({"name": name, "pass": bool(ok), "detail": detail})

    @property
    def passed(self) -> bool:
        return all(i["pass"] for i in self.items)

    def to_json(self) -> dict:
        return {"pass": self.passed, "checks": self.items}


_MAX_SLACK = 1e-6


def _close(a: mpmath.mpf, b: mpmath.mpf, rel=mpmath.mpf("1e-20")) -> bool:
    return abs(a - b) <= rel * max(1, abs(a), abs(b))


def _bound_ok(lhs_log, bound_log, slack) -> bool:
    return lhs_log <= bound_log + mpmath.mpf(slack) * max(1, abs(bound_log))


def _check_bound_claim(rep: Report, claim: dict, field: dict, slack: float,
                       expect_params: dict | None = None, expect_lhs: dict | None = None):
    name = claim.get("name", "?")
    kind = claim.get("bound")
    params = claim.get("params", {})
    with mpmath.workdps(DPS):
        try:
            b = oracle_bound(kind, params, field)
        except (KeyError, TypeError, ValueError) as exc:
            rep.add(f"{name}: bound recomputation", False, f"cannot evaluate: {exc!r}")
            return
        rec = claim.get("bound_log", ["nan", "nan"])
        try:
            lo = mpmath.mpf(rec[0])
        except (TypeError, ValueError):
            lo = mpmath.mpf("nan")
        rep.add(f"{name}: bound recomputation", _close(lo, b),
                f"recorded {rec[0]}, oracle {mpmath.nstr(b, 25)}")
        if expect_params is not None:
            bad = {k: (params.get(k), v) for k, v in expect_params.items() if params.get(k) != v}
            rep.add(f"{name}: parameters", not bad, f"mismatch {bad}" if bad else "")
        lhs = claim.get("lhs")
        if expect_lhs is not None:
            rep.add(f"{name}: height recomputation", lhs == expect_lhs,
                    f"recorded {lhs}, oracle {expect_lhs}")
        try:
            lhs_log = _hlog(lhs)
            consistent = _close(lhs_log, mpmath.mpf(claim.get("lhs_log", "nan")), mpmath.mpf("1e-25"))
        except (TypeError, ValueError, KeyError):
            rep.add(f"{name}: height", False, "unreadable height")
            return
        rep.add(f"{name}: recorded log height", consistent, "")
        ok = _bound_ok(lhs_log, b, slack)
        rep.add(f"{name}: height <= bound", ok,
                f"log lhs {mpmath.nstr(lhs_log, 15)} vs bound {mpmath.nstr(b, 15)}")
        if claim.get("pass") and not ok:
            rep.add(f"{name}: recorded verdict", False, "claim marked pass but fails")


def _claims_by_name(cert: dict) -> dict:
    return {c["name"]: c for c in cert.get("claims", [])}


def _point_checks(rep: Report, P: OracleProblem, label: str, x, *, zero=True, avoid=True):
    R = P.R
    rep.add(f"{label} != 0", any(R.nz(a) for a in x))
    rep.add(f"{label} in V", P.in_V(x))
    if zero:
        rep.add(f"F({label}) = 0", not R.nz(P.form(x, x)))
    if avoid:
        w = P.avoid_witnesses(x)
        rep.add(f"{label} outside Z_S", w is not None, f"witnesses {w}")


def certify(doc: dict, *, slack: float | None = None) -> Report:
    """Recheck a certificate document independently of the pipeline code."""
    rep = Report()
    try:
        P = OracleProblem(doc["problem"])
        cert = doc["certificate"]
        op = cert["operation"]
    except (KeyError, TypeError, SchemaError, ValueError) as exc:
        rep.add("document", False, f"unreadable certificate: {exc!r}")
        return rep
    if slack is None:
        slack = doc.get("flags", {}).get("slack") or 1e-9
    slack = min(float(slack), _MAX_SLACK)
    field = doc["problem"].get("field", {"kind": "Q"})
    R = P.R
    out = cert.get("outputs", {})
    claims = _claims_by_name(cert)
    checked: set = set()
    HF = R.H([a for row in P.F for a in row]) if P.F is not None else None
    HV = R.subspace_heights(P.V)[1]
    try:
        if op == "solve":
            _certify_solve(rep, P, out, claims, checked, field, slack, HF, HV)
        elif op == "zeros":
            _certify_zeros(rep, P, out, claims, checked, field, slack, HF, HV)
        elif op == "flags":
            _certify_zeros(rep, P, out, claims, checked, field, slack, HF, HV)
            _certify_flags(rep, P, out, claims, checked, field, slack, HF, HV)
        elif op == "basis-outside":
            _certify_basis_outside(rep, P, out, claims, checked, field, slack, HV)
        elif op == "siegel":
            _certify_siegel(rep, P, out, claims, checked, field, slack, HV)
        elif op == "ff-orth":
            _certify_orth(rep, P, out, claims, checked, field, slack, HF)
        elif op == "witt":
            _certify_witt(rep, P, out)
        else:
            rep.add("operation", False, f"unknown operation {op!r}")
    except (KeyError, IndexError, TypeError, ValueError, ZeroDivisionError) as exc:
        rep.add("outputs", False, f"malformed outputs: {exc!r}")
    # every other bound claim: recompute the bound from its recorded parameters
    for name, c in claims.items():
        if name in checked or c.get("kind") != "bound":
            continue
        _check_bound_claim(rep, c, field, slack)
    if not cert.get("claims") and op not in ("witt",):
        rep.add("claims", False, "certificate has no claims")
    return rep


def _certify_solve(rep, P, out, claims, checked, field, slack, HF, HV):
    R = P.R
    z = P.ring_point(out["z"])
    _point_checks(rep, P, "z", z)
    chosen = out.get("chosen", [])
    ok = len(chosen) == len(P.S) and all(
        R.nz(P.peval(P.S[i][k], z)) for i, k in enumerate(chosen))
    rep.add("chosen polynomials are nonzero at z", ok, f"chosen {chosen}")
    D = sum(P.degree(P.S[i][k]) for i, k in enumerate(chosen)) if ok else None
    c = claims.get("z_bound_miss")
    rep.add("z_bound_miss present", c is not None)
    if c is not None:
        checked.add("z_bound_miss")
        _check_bound_claim(rep, c, field, slack,
                           {"L": P.L, "D": D, "HF": HF, "HV": HV},
                           R.h([R.parse(a) for a in out["z"]]))


def _certify_zeros(rep, P, out, claims, checked, field, slack, HF, HV):
    R = P.R
    texts = out["points"]
    pts = [P.ring_point(x) for x in texts]
    m = out["m"]
    rep.add("number of points = m", len(pts) == m)
    rep.add("points are linearly independent", R.rank(pts) == len(pts))
    hs, Hs = [], []
    for n, (x, xt) in enumerate(zip(pts, texts), start=1):
        _point_checks(rep, P, f"x{n}", x)
        h = R.h([R.parse(a) for a in xt])
        hs.append(_hlog(h))
        Hs.append(_hlog(R.H([R.parse(a) for a in xt])))
        name = f"x{n} miss_hyper_bnd"
        c = claims.get(name)
        rep.add(f"{name} present", c is not None)
        if c is not None:
            checked.add(name)
            _check_bound_claim(rep, c, field, slack,
                               {"L": P.L, "M": P.M, "HF": HF, "HV": HV}, h)
    rep.add("heights nondecreasing", all(a <= b for a, b in zip(hs, hs[1:]))
            and all(a <= b for a, b in zip(Hs, Hs[1:])))


def _certify_flags(rep, P, out, claims, checked, field, slack, HF, HV):
    R = P.R
    pts = [P.ring_point(x) for x in out["points"]]
    m = out["m"]
    flags = out["flags"]
    rep.add("one chain per point", len(flags) == len(pts))
    for n, (x, chain) in enumerate(zip(pts, flags), start=1):
        rep.add(f"chain {n} length m", len(chain) == m)
        prev = top = None
        for k, basis_t in enumerate(chain, start=1):
            B = [P.ring_point(v) for v in basis_t]
            rep.add(f"W{n}^{k} dimension", len(B) == k and R.rank(B) == k)
            rep.add(f"W{n}^{k} in V", all(P.in_V(v) for v in B))
            rep.add(f"W{n}^{k} totally isotropic",
                    not any(R.nz(P.form(a, b)) for a in B for b in B))
            rep.add(f"W{n}^{k} contains x{n}", R.rank(B + [x]) == len(B))
            rep.add(f"W{n}^{k} not inside Z_S", P.avoid_witnesses(x) is not None)
            if prev is not None:
                rep.add(f"W{n}^{k - 1} inside W{n}^{k}", R.rank(B + prev) == len(B))
            prev = B
            HW = R.subspace_heights([[R.parse(a) for a in v] for v in basis_t])[1]
            top = HW
            name = f"W{n}^{k} cor_bnd_1"
            c = claims.get(name)
            rep.add(f"{name} present", c is not None)
            if c is not None:
                checked.add(name)
                _check_bound_claim(rep, c, field, slack,
                                   {"L": P.L, "M": P.M, "N": P.N, "m": m, "k": k,
                                    "HF": HF, "HV": HV}, HW)
        name = f"W{n} cor_bnd"
        c = claims.get(name)
        rep.add(f"{name} present", c is not None)
        if c is not None:
            checked.add(name)
            # the top of the chain is the maximal isotropic space the bound concerns
            _check_bound_claim(rep, c, field, slack,
                               {"L": P.L, "M": P.M, "N": P.N, "m": m, "HF": HF, "HV": HV},
                               top)


def _certify_basis_outside(rep, P, out, claims, checked, field, slack, HV):
    R = P.R
    texts = out["basis"]
    pts = [P.ring_point(x) for x in texts]
    rep.add("basis has L vectors", len(pts) == P.L and R.rank(pts) == P.L)
    hs = []
    for n, (x, xt) in enumerate(zip(pts, texts), start=1):
        _point_checks(rep, P, f"x{n}", x, zero=False)
        h = R.h([R.parse(a) for a in xt])
        hs.append(_hlog(h))
        name = f"x{n} gen_bnd_1"
        c = claims.get(name)
        rep.add(f"{name} present", c is not None)
        if c is not None:
            checked.add(name)
            _check_bound_claim(rep, c, field, slack, {"L": P.L, "M": P.M, "HV": HV}, h)
    rep.add("heights nondecreasing", all(a <= b for a, b in zip(hs, hs[1:])))


def _product(R: _Ring, texts) -> dict:
    if R.p is None:
        v = 1
        for x in texts:
            v *= int(R.H([R.parse(a) for a in x])["sq"])
        return {"sq": str(v)}
    return {"exp": str(sum(int(R.H([R.parse(a) for a in x])["exp"]) for x in texts))}


def _certify_siegel(rep, P, out, claims, checked, field, slack, HV):
    R = P.R
    pts = [P.ring_point(x) for x in out["basis"]]
    rep.add("basis of V", len(pts) == P.L and R.rank(pts) == P.L
            and all(P.in_V(x) for x in pts))
    c = claims.get("siegel_for_V")
    rep.add("siegel_for_V present", c is not None)
    if c is not None:
        checked.add("siegel_for_V")
        _check_bound_claim(rep, c, field, slack, {"L": P.L, "HV": HV},
                           _product(R, out["basis"]))


def _certify_orth(rep, P, out, claims, checked, field, slack, HF):
    R = P.R
    pts = [P.ring_point(x) for x in out["basis"]]
    rep.add("basis of V", len(pts) == P.L and R.rank(pts) == P.L
            and all(P.in_V(x) for x in pts))
    rep.add("pairwise orthogonal", not any(R.nz(P.form(a, b))
                                           for i, a in enumerate(pts) for b in pts[i + 1:]))
    c = claims.get("orth_siegel")
    rep.add("orth_siegel present", c is not None)
    if c is not None:
        checked.add("orth_siegel")
        HVp = R.subspace_heights(P.V)[0]
        _check_bound_claim(rep, c, field, slack, {"L": P.L, "HF": HF, "HV": HVp},
                           _product(R, out["basis"]))


def _certify_witt(rep, P, out):
    R = P.R
    rad = [P.ring_point(v) for v in out.get("radical", [])]
    for i, v in enumerate(rad):
        rep.add(f"radical vector {i + 1} in V", P.in_V(v))
        rep.add(f"radical vector {i + 1} orthogonal to V",
                not any(R.nz(P.form(v, w)) for w in P.Vr))
    for i, (x, y) in enumerate(out.get("pairs", []), start=1):
        x, y = P.ring_point(x), P.ring_point(y)
        rep.add(f"pair {i} isotropic", not R.nz(P.form(x, x)) and not R.nz(P.form(y, y)))
        rep.add(f"pair {i} nondegenerate", R.nz(P.form(x, y)))
    dims = len(rad) + 2 * len(out.get("pairs", [])) + len(out.get("anisotropic", []))
    rep.add("dimensions add up to L", dims == P.L)
    rep.add("lambda", out.get("lambda") == len(rad))


# ---------------------------------------------------------------------------
# fault injection

def _bump_scalar(text: str, field: dict) -> str:
    # a large shift always changes the height of a small point
    if field.get("kind") == "Fq_t":
        return f"({text}) + t^9"
    return str(Fraction(text) + 7 ** 9)


def tamper(doc: dict, what: str, index: int = 0) -> dict:
    """Copy of ``doc`` with one deliberate fault ('point', 'height' or 'bound')."""
    doc = json.loads(json.dumps(doc))
    cert = doc["certificate"]
    out = cert["outputs"]
    field = doc["problem"].get("field", {"kind": "Q"})
    if what == "point":
        for key in ("z", "points", "basis"):
            if key in out:
                target = out[key]
                vec = target if key == "z" else target[index % len(target)]
                # shift a zero coordinate when there is one, so the projective point moves
                zeros = [k for k, a in enumerate(vec) if a.strip() == "0"]
                j = zeros[index % len(zeros)] if zeros else index % len(vec)
                vec[j] = _bump_scalar(vec[j], field)
                return doc
        raise ValueError("certificate has no point output")
    bounds = [c for c in cert["claims"] if c.get("kind") == "bound" and c.get("status") == "main"]
    if not bounds:
        raise ValueError("certificate has no main bound claim")
    c = bounds[index % len(bounds)]
    if what == "height":
        lhs = c["lhs"]
        if "exp" in lhs:
            c["lhs"] = {"exp": str(int(lhs["exp"]) + 1)}
        else:
            c["lhs"] = {"sq": str(int(lhs["sq"]) * 4)}
        with mpmath.workdps(40):
            c["lhs_log"] = mpmath.nstr(_hlog(c["lhs"]), 30)
        return doc
    if what == "bound":
        if index % 2 == 0:
            lo, hi = c["bound_log"]
            with mpmath.workdps(40):
                c["bound_log"] = [mpmath.nstr(mpmath.mpf(lo) - 1, 30),
                                  mpmath.nstr(mpmath.mpf(hi) - 1, 30)]
        else:
            hv = next(k for k in ("HV", "HF", "HQ", "D", "M", "L") if k in c["params"])
            val = c["params"][hv]
            if isinstance(val, dict):
                c["params"][hv] = ({"exp": str(int(val["exp"]) + 1)} if "exp" in val
                                   else {"sq": str(int(val["sq"]) * 4)})
            else:
                c["params"][hv] = val + 1
        return doc
    raise ValueError(f"unknown tamper kind {what!r}")


def point_to_text(x, field: dict) -> list[str]:
    """Oracle point as scalar strings (for feeding the pipeline)."""
    if field.get("kind") != "Fq_t":
        return [str(a) for a in x]
    out = []
    for a in x:
        terms = [f"{c}*t^{k}" for k, c in enumerate(a) if c]
        out.append(" + ".join(terms) if terms else "0")
    return out


def log_height(x, field: dict) -> mpmath.mpf:
    """log H of an oracle point."""
    R = _Ring(field)
    if R.p is None:
        y = R.primitive(list(x))
        return mpmath.log(max(abs(a) for a in y))
    y = R.primitive([tuple(a) for a in x])
    return mpmath.mpf(max(_pdeg(a) for a in y))
