"""Sparse multivariate polynomials, lex orders and single-divisor reduction."""

from __future__ import annotations

import re
from typing import Iterable, Mapping, Sequence

from .bounds import bound_evaluator, check_bound
from .constants import ConstantsTable
from .errors import PreconditionError, SchemaError
from .fields import QQ, Field, parse_expression
from .heights import Height, height_h
from .linalg import rank
from .search import DEFAULT_BUDGET, affine_points

Exps = tuple[int, ...]


class MultiPoly:
    """Polynomial in X1..Xn over a field; a dict from exponent tuples to coefficients."""

    __slots__ = ("field", "nvars", "terms", "_deg")

    def __init__(self, terms: Mapping[Exps, object], nvars: int, field: Field = QQ):
        self.field = field
        self.nvars = nvars
        clean = {}
        for e, c in terms.items():
            e = tuple(int(k) for k in e)
            if len(e) != nvars:
                raise ValueError(f"exponent {e} does not have {nvars} entries")
            if any(k < 0 for k in e):
                raise ValueError("negative exponent")
            c = field(c)
            if c:
                clean[e] = c
        self.terms = clean
        self._deg = max((sum(e) for e in clean), default=-1)

    # ---- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, field: Field = QQ) -> "MultiPoly":
        return cls({}, nvars, field)

    @classmethod
    def const(cls, c, nvars: int, field: Field = QQ) -> "MultiPoly":
        return cls({(0,) * nvars: c}, nvars, field)

    @classmethod
    def var(cls, i: int, nvars: int, field: Field = QQ) -> "MultiPoly":
        """The variable X_{i+1} (0-based index i)."""
        e = [0] * nvars
        e[i] = 1
        return cls({tuple(e): 1}, nvars, field)

    @classmethod
    def linear(cls, coeffs: Sequence, field: Field = QQ) -> "MultiPoly":
        n = len(coeffs)
        return cls({tuple(1 if j == i else 0 for j in range(n)): c
                    for i, c in enumerate(coeffs)}, n, field)

    @classmethod
    def quadratic_form(cls, F: Sequence[Sequence], field: Field = QQ) -> "MultiPoly":
        """sum_ij f_ij X_i X_j for a symmetric matrix F."""
        n = len(F)
        terms: dict = {}
        for i in range(n):
            for j in range(n):
                e = [0] * n
                e[i] += 1
                e[j] += 1
                e = tuple(e)
                terms[e] = terms.get(e, field.zero) + field(F[i][j])
        return cls(terms, n, field)

    @classmethod
    def parse(cls, text: str, nvars: int, field: Field = QQ) -> "MultiPoly":
        """Parse text such as ``"X1*X2 - 3X3^2"`` (``t`` allowed over F_p(t))."""
        if not isinstance(text, str):
            raise SchemaError(f"polynomial text expected, got {text!r}")

        def atom(name):
            parts = re.fullmatch(r"(?:[Xx]\d+|t)+", name)
            if not parts:
                raise SchemaError(f"unknown symbol {name!r} in {text!r}")
            out = cls.const(1, nvars, field)
            for tok in re.findall(r"[Xx]\d+|t", name):
                if tok == "t":
                    if field.kind != "Fq_t":
                        raise SchemaError(f"symbol 't' is only allowed over F_p(t): {text!r}")
                    out = out * cls.const(field.t, nvars, field)
                    continue
                k = int(tok[1:])
                if not 1 <= k <= nvars:
                    raise SchemaError(f"variable {tok} out of range 1..{nvars} in {text!r}")
                out = out * cls.var(k - 1, nvars, field)
            return out

        try:
            val = parse_expression(text, atom, lambda n: cls.const(n, nvars, field))
        except ZeroDivisionError as exc:
            raise SchemaError(f"division by zero in {text!r}") from exc
        if not isinstance(val, MultiPoly):
            val = cls.const(val, nvars, field)
        return val

    @classmethod
    def from_json(cls, obj, nvars: int, field: Field = QQ) -> "MultiPoly":
        if isinstance(obj, str):
            return cls.parse(obj, nvars, field)
        if not isinstance(obj, list):
            raise SchemaError(f"polynomial must be a string or a term list, got {obj!r}")
        terms: dict = {}
        for item in obj:
            if not (isinstance(item, list) and len(item) == 2 and isinstance(item[0], list)):
                raise SchemaError(f"polynomial term must be [exponents, coefficient]: {item!r}")
            e = tuple(item[0])
            if len(e) != nvars or not all(isinstance(k, int) and k >= 0 for k in e):
                raise SchemaError(f"bad exponent vector {item[0]!r} for N = {nvars}")
            c = item[1]
            c = field.parse(c) if isinstance(c, str) else field(c)
            terms[e] = terms.get(e, field.zero) + c
        return cls(terms, nvars, field)

    def to_json(self) -> list:
        return [[list(e), self.field.format(self.terms[e])] for e in self.monomials()]

    # ---- structure --------------------------------------------------------
    def monomials(self) -> list[Exps]:
        """Stored monomials in graded lexicographic order (largest first)."""
        return sorted(self.terms, key=lambda e: (sum(e), e), reverse=True)

    def coefficient_vector(self) -> list:
        return [self.terms[e] for e in self.monomials()]

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return self._deg

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_parts(self) -> dict[int, "MultiPoly"]:
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(sum(e), {})[e] = c
        return {d: MultiPoly(t, self.nvars, self.field) for d, t in sorted(parts.items())}

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if not self.terms:
            return other == 0
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    # ---- arithmetic -------------------------------------------------------
    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MultiPoly.const(other, self.nvars, self.field)

    def __add__(self, other):
        o = self._lift(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, self.field.zero) + c
        return MultiPoly(t, self.nvars, self.field)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.nvars, self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        t: dict = {}
        zero = self.field.zero
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, zero) + c1 * c2
        return MultiPoly(t, self.nvars, self.field)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, MultiPoly):
            if c.degree != 0:
                raise SchemaError("division by a nonconstant polynomial")
            c = c.terms[(0,) * c.nvars]
        c = self.field(c)
        return MultiPoly({e: v / c for e, v in self.terms.items()}, self.nvars, self.field)

    def __pow__(self, k: int):
        out = MultiPoly.const(1, self.nvars, self.field)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "MultiPoly":
        return self * self.field(c)

    # ---- evaluation and substitution -------------------------------------
    def evaluate(self, z: Sequence):
        if len(z) != self.nvars:
            raise ValueError(f"point has {len(z)} coordinates, polynomial has {self.nvars} variables")
        F = self.field
        z = [F(a) for a in z]
        total = F.zero
        powers: dict = {}
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in powers:
                        powers[key] = z[i] ** k
                    term = term * powers[key]
                    if not term:
                        break
            total = total + term
        return total

    __call__ = evaluate

    def compose(self, subs: Sequence["MultiPoly"]) -> "MultiPoly":
        """P(subs[0], ..., subs[n-1]); all substitutes share one variable count."""
        if len(subs) != self.nvars:
            raise ValueError("need one substitute per variable")
        if not subs:
            return self
        m = subs[0].nvars
        out = MultiPoly.zero(m, self.field)
        cache: dict = {}
        for e, c in self.terms.items():
            term = MultiPoly.const(c, m, self.field)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = subs[i] ** k
                    term = term * cache[(i, k)]
            out = out + term
        return out

    def substitute_linear(self, M: Sequence[Sequence]) -> "MultiPoly":
        """P(M Y): X_i -> sum_j M[i][j] Y_j."""
        F = self.field
        m = len(M[0]) if M else 0
        subs = [MultiPoly.linear([F(a) for a in row], F) if m else MultiPoly.zero(0, F)
                for row in M]
        return self.compose(subs)

    def drop_variable(self, i: int) -> "MultiPoly":
        """Remove variable i (which must not occur)."""
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                raise ValueError("variable occurs in polynomial")
            t[e[:i] + e[i + 1:]] = c
        return MultiPoly(t, self.nvars - 1, self.field)

    def insert_variable(self, i: int) -> "MultiPoly":
        return MultiPoly({e[:i] + (0,) + e[i:]: c for e, c in self.terms.items()},
                         self.nvars + 1, self.field)

    def univariate(self, i: int) -> dict[int, "MultiPoly"]:
        """Coefficients in X_i: {k: polynomial free of X_i}."""
        out: dict[int, dict] = {}
        for e, c in self.terms.items():
            k = e[i]
            out.setdefault(k, {})[e[:i] + (0,) + e[i + 1:]] = c
        return {k: MultiPoly(t, self.nvars, self.field) for k, t in out.items()}

    def primitive(self) -> "MultiPoly":
        """Scaled to a primitive ring coefficient vector, leading coefficient normalized."""
        mons = self.monomials()
        if not mons:
            return self
        prim = self.field.primitive([self.terms[e] for e in mons])
        return MultiPoly({e: self.field.from_ring(a) for e, a in zip(mons, prim)},
                         self.nvars, self.field)

    # ---- display ----------------------------------------------------------
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in self.monomials():
            c = self.terms[e]
            mono = "*".join(f"X{i + 1}" + (f"^{k}" if k > 1 else "")
                            for i, k in enumerate(e) if k)
            cs = self.field.format(c)
            if not mono:
                parts.append(f"({cs})" if " " in cs or "/" in cs else cs)
            elif c == self.field.one:
                parts.append(mono)
            elif c == -self.field.one:
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MultiPoly({self}, nvars={self.nvars}, field={self.field!r})"


class MonomialOrder:
    """Lexicographic order with a variable priority (highest first)."""

    def __init__(self, priority: Sequence[int]):
        self.priority = tuple(priority)
        if sorted(self.priority) != list(range(len(self.priority))):
            raise ValueError("priority must be a permutation of the variable indices")

    @classmethod
    def lex(cls, n: int, first: Sequence[int] = ()) -> "MonomialOrder":
        """Lex with the given variables first, then the rest in index order."""
        rest = [i for i in range(n) if i not in first]
        return cls(list(first) + rest)

    def key(self, e: Exps) -> tuple:
        return tuple(e[i] for i in self.priority)

    def leading(self, P: MultiPoly) -> Exps:
        if not P.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(P.terms, key=self.key)

    def __repr__(self) -> str:
        return f"MonomialOrder({self.priority})"


def _divides(a: Exps, b: Exps) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reduce_by_single(P1: MultiPoly, P2: MultiPoly, order: MonomialOrder
                     ) -> tuple[MultiPoly, MultiPoly]:
    """(P1', R) with P1 = P1' + R*P2 and LM(P2) dividing no monomial of P1'."""
    if not P2:
        raise ValueError("cannot reduce by the zero polynomial")
    F = P1.field
    n = P1.nvars
    lm = order.leading(P2)
    lc = P2.terms[lm]
    rem = dict(P1.terms)
    quot: dict = {}
    tail = [(e, c) for e, c in P2.terms.items() if e != lm]
    while True:
        divisible = [e for e in rem if _divides(lm, e)]
        if not divisible:
            break
        e = max(divisible, key=order.key)
        f = rem.pop(e) / lc
        shift = tuple(a - b for a, b in zip(e, lm))
        quot[shift] = quot.get(shift, F.zero) + f
        for e2, c2 in tail:
            m = tuple(a + b for a, b in zip(e2, shift))
            v = rem.get(m, F.zero) - f * c2
            if v:
                rem[m] = v
            else:
                rem.pop(m, None)
    return MultiPoly(rem, n, F), MultiPoly(quot, n, F)


def restrict_to_basis(P: MultiPoly, A: Sequence[Sequence]) -> MultiPoly:
    """P_A(Y) = P(Y_1 x_1 + ... + Y_L x_L) for basis vectors x_i (the rows of A)."""
    F = P.field
    if not A:
        raise PreconditionError("restriction to the zero subspace")
    if any(len(x) != P.nvars for x in A):
        raise ValueError("basis vectors must have one entry per variable")
    if rank(A, F) != len(A):
        raise PreconditionError("rank-deficient basis")
    cols = [[F(A[j][i]) for j in range(len(A))] for i in range(P.nvars)]
    return P.substitute_linear(cols)


def nonvanishing_point(P: MultiPoly, D: int | None = None, *, budget: int = DEFAULT_BUDGET,
                       slack: float = 1e-9):
    """First point z (in nondecreasing h) with P(z) != 0, plus a certificate.

    The certificate compares h(z) with A_K(D), D defaulting to deg P.
    """
    if not P:
        raise PreconditionError("the zero polynomial vanishes everywhere")
    F = P.field
    D = P.degree if D is None else D
    if P.nvars == 0:
        z: tuple = ()
    else:
        _, z = next(affine_points(F, P.nvars, accept=lambda z: bool(P(z)), budget=budget))
    h = height_h(z, F) if z else (Height(exp=0) if F.kind == "Fq_t" else Height(sq=1))
    table = ConstantsTable.for_field(F)
    bound = bound_evaluator("nonvanish", {"D": max(D, 1)}, table)
    cert = {"bound": "nonvanish", "params": {"D": max(D, 1)}, "h": h, "bound_iv": bound,
            "pass": check_bound(h, bound, slack)}
    return z, cert


def product_of(polys: Iterable[MultiPoly], nvars: int, field: Field) -> MultiPoly:
    out = MultiPoly.const(1, nvars, field)
    for p in polys:
        out = out * p
    return out
