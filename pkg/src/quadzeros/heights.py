"""Heights of vectors, subspaces and polynomials over Q and F_p(t).

Over Q every height is read off the primitive integer representative: H is
its max-norm, the Euclidean variant is its 2-norm (stored as an exact square).
Over F_p(t) the primitive polynomial representative gives H = e^k with k
the maximal degree; there are no archimedean places, so both variants agree.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Sequence

import mpmath
import sympy
from mpmath.ctx_iv import MPIntervalContext

from .fields import QQ, Field, FunctionField, GFPoly, RatFunc
from .linalg import (
    in_span,
    kernel_basis,
    rank,
    ring_det,
    ring_kernel,
    ring_rows,
    rref,
)

IV = MPIntervalContext()
IV.prec = 160


def iv_lo(x) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[0])


def iv_hi(x) -> mpmath.mpf:
    return mpmath.mp.make_mpf(x._mpi_[1])


@total_ordering
class Height:
    """Exact height value.

    Over Q, ``sq`` holds the exact square of the height.  Over F_p(t),
    ``exp`` holds k with height e^k.  Comparisons never go through floats.
    """

    __slots__ = ("sq", "exp")

    def __init__(self, *, sq: int | None = None, exp: int | None = None):
        if (sq is None) == (exp is None):
            raise ValueError("exactly one of sq / exp must be given")
        self.sq = sq
        self.exp = exp

    @classmethod
    def of_int(cls, value: int) -> "Height":
        return cls(sq=value * value)

    @property
    def is_ff(self) -> bool:
        return self.exp is not None

    def _key(self, other):
        if isinstance(other, Height):
            if self.is_ff != other.is_ff:
                raise TypeError("comparing heights over different fields")
            return (self.exp, other.exp) if self.is_ff else (self.sq, other.sq)
        if isinstance(other, int) and not self.is_ff:
            return self.sq, other * other
        return None

    def __eq__(self, other) -> bool:
        k = self._key(other)
        if k is None:
            return NotImplemented
        return k[0] == k[1]

    def __lt__(self, other) -> bool:
        k = self._key(other)
        if k is None:
            return NotImplemented
        return k[0] < k[1]

    def __hash__(self) -> int:
        return hash((self.sq, self.exp))

    def __mul__(self, other: "Height") -> "Height":
        if self.is_ff:
            return Height(exp=self.exp + other.exp)
        return Height(sq=self.sq * other.sq)

    def __pow__(self, k: int) -> "Height":
        if self.is_ff:
            return Height(exp=self.exp * k)
        return Height(sq=self.sq ** k)

    @property
    def value(self):
        """Exact value when it is an integer (max-norm heights over Q)."""
        if self.is_ff:
            return None
        r = math.isqrt(self.sq)
        return r if r * r == self.sq else None

    def log_iv(self):
        if self.is_ff:
            return IV.mpf(self.exp)
        return IV.log(IV.mpf(self.sq)) / 2

    def log(self) -> float:
        if self.is_ff:
            return float(self.exp)
        return math.log(self.sq) / 2 if self.sq > 0 else float("-inf")

    def __float__(self) -> float:
        return math.exp(self.log())

    def text(self) -> str:
        if self.is_ff:
            return f"e^{self.exp}"
        v = self.value
        return str(v) if v is not None else f"sqrt({self.sq})"

    def to_json(self) -> dict:
        if self.is_ff:
            return {"exp": str(self.exp)}
        return {"sq": str(self.sq)}

    @classmethod
    def from_json(cls, obj: dict) -> "Height":
        if "exp" in obj:
            return cls(exp=int(obj["exp"]))
        return cls(sq=int(obj["sq"]))

    def __repr__(self) -> str:
        return f"Height({self.text()})"


ONE_Q = Height(sq=1)
ONE_FF = Height(exp=0)


def field_of(values) -> Field:
    for v in values:
        if isinstance(v, RatFunc):
            return FunctionField(v.p)
        if isinstance(v, GFPoly):
            return FunctionField(v.p)
    return QQ


def _one(field: Field) -> Height:
    return ONE_FF if field.kind == "Fq_t" else ONE_Q


def height_of_ring_vector(y: Sequence, field: Field) -> Height:
    """H of a primitive ring vector."""
    if field.kind == "Fq_t":
        return Height(exp=max(a.degree for a in y))
    m = max(abs(a) for a in y)
    return Height(sq=m * m)


def height_H(x: Sequence, field: Field | None = None) -> Height:
    """Projective height; H(0) = 1 by convention."""
    field = field or field_of(x)
    y = field.primitive([field(a) for a in x]) if len(x) else None
    if y is None:
        return _one(field)
    return height_of_ring_vector(y, field)


def height_h(x: Sequence, field: Field | None = None) -> Height:
    """Inhomogeneous height h(x) = H(1, x)."""
    field = field or field_of(x)
    return height_H([field.one] + [field(a) for a in x], field)


def height_HH(x: Sequence, field: Field | None = None) -> Height:
    """Height with the Euclidean norm at the infinite place."""
    field = field or field_of(x)
    if field.kind == "Fq_t":
        return height_H(x, field)
    y = field.primitive([field(a) for a in x]) if len(x) else None
    if y is None:
        return ONE_Q
    return Height(sq=sum(a * a for a in y))


def _irreducible_factors(a: GFPoly) -> list[GFPoly]:
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed(a.c)), t, modulus=a.p)
    out = []
    for f, _ in poly.factor_list()[1]:
        coeffs = [int(c) % a.p for c in reversed(f.all_coeffs())]
        out.append(GFPoly(coeffs, a.p).monic())
    return out


def places(values: Sequence, field: Field) -> list:
    """Places where some nonzero value has absolute value other than 1.

    Over Q a finite place is a prime; over F_p(t) it is a monic irreducible
    polynomial.  The infinite place is the string ``"inf"``.
    """
    found: set = set()
    for a in values:
        a = field(a)
        if not a:
            continue
        num, den = field.numden(a)
        for part in (num, den):
            if field.kind == "Fq_t":
                if part.degree > 0:
                    found.update(_irreducible_factors(part))
            else:
                found.update(sympy.factorint(abs(part)))
    key = (lambda P: (P.degree, P.c)) if field.kind == "Fq_t" else (lambda P: P)
    return ["inf"] + sorted(found, key=key)


def _order(n, P, field: Field) -> int:
    k = 0
    if field.kind == "Fq_t":
        while n and not (n % P):
            n, k = n // P, k + 1
    else:
        while n and n % P == 0:
            n, k = n // P, k + 1
    return k


def abs_at(a, place, field: Field):
    """|a|_v.  Exact Fraction over Q; over F_p(t) the exponent k with |a|_v = e^k.

    Over F_p(t) the normalisation is |p(t)|_P = e^(-deg P * ord_P p) and
    |p(t)|_inf = e^(deg p).  Zero maps to 0 over Q and to None over F_p(t).
    """
    a = field(a)
    if field.kind == "Fq_t":
        if not a:
            return None
        if place == "inf":
            return a.num.degree - a.den.degree
        return -place.degree * (_order(a.num, place, field) - _order(a.den, place, field))
    if place == "inf" or not a:
        return abs(a)
    k = _order(a.numerator, place, field) - _order(a.denominator, place, field)
    return Fraction(1, place ** k) if k >= 0 else Fraction(place ** -k)


def height_by_places(x: Sequence, field: Field | None = None) -> Height:
    """H(x) as the product over places of the local max norms."""
    field = field or field_of(x)
    x = [field(a) for a in x]
    if not any(x):
        return _one(field)
    if field.kind == "Fq_t":
        total = sum(max(abs_at(a, v, field) for a in x if a) for v in places(x, field))
        return Height(exp=total)
    prod = Fraction(1)
    for v in places(x, field):
        prod *= max(abs_at(a, v, field) for a in x)
    assert prod.denominator == 1
    return Height(sq=prod.numerator ** 2)


def ff_log_height(x: Sequence, field: FunctionField | None = None) -> int:
    field = field or field_of(x)
    if field.kind != "Fq_t":
        raise ValueError("ff_log_height expects a vector over F_p(t)")
    y = field.primitive([field(a) for a in x])
    if y is None:
        raise ValueError("ff_log_height of the zero vector")
    return max(a.degree for a in y)


def plucker_vector(basis: Sequence[Sequence], field: Field) -> tuple:
    """Primitive Plucker vector of the span of ``basis`` (rows).

    Minors are taken over coordinate index sets in lexicographic order.
    """
    L = len(basis)
    if L == 0:
        return (field.ring_one,)
    rows, _ = ring_rows(basis, field)
    N = len(rows[0])
    from itertools import combinations

    minors = [ring_det([[r[j] for j in cs] for r in rows], field.ring_one)
              for cs in combinations(range(N), L)]
    prim = field.primitive([field.from_ring(a) for a in minors])
    if prim is None:
        raise ValueError("basis is rank deficient")
    return prim


def _vector_heights(prim: Sequence, field: Field) -> tuple[Height, Height]:
    H = height_of_ring_vector(prim, field)
    if field.kind == "Fq_t":
        return H, H
    return H, Height(sq=sum(a * a for a in prim))


class Subspace:
    """Subspace of K^N given by a list of spanning row vectors.

    The basis is kept as given (after coercion); a rank-deficient list is
    rejected.  Equality compares reduced echelon forms.
    """

    def __init__(self, basis: Sequence[Sequence], field: Field, N: int | None = None,
                 *, check: bool = True):
        self.field = field
        rows = [tuple(field(a) for a in v) for v in basis]
        if N is None:
            if not rows:
                raise ValueError("ambient dimension needed for the zero subspace")
            N = len(rows[0])
        if any(len(r) != N for r in rows):
            raise ValueError("basis vectors must all have length N")
        self.N = N
        self.basis = tuple(rows)
        if check and rows and rank(rows, field) != len(rows):
            raise ValueError("rank-deficient basis")

    @classmethod
    def full(cls, field: Field, N: int) -> "Subspace":
        return cls([[field.one if i == j else field.zero for j in range(N)]
                    for i in range(N)], field, N, check=False)

    @classmethod
    def zero(cls, field: Field, N: int) -> "Subspace":
        return cls([], field, N)

    @classmethod
    def from_equations(cls, A: Sequence[Sequence], field: Field, N: int) -> "Subspace":
        """Subspace {x : A x = 0}."""
        if not A:
            return cls.full(field, N)
        return cls(kernel_basis(A, field, N), field, N, check=False)

    @classmethod
    def spanned_by(cls, vectors: Sequence[Sequence], field: Field, N: int) -> "Subspace":
        """Span of a possibly dependent list of vectors."""
        R, _ = rref(vectors, field) if vectors else ([], [])
        return cls(R, field, N, check=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return self.dim

    @cached_property
    def _rref(self):
        if not self.basis:
            return (), ()
        R, piv = rref(self.basis, self.field)
        return tuple(tuple(r) for r in R), tuple(piv)

    @property
    def echelon(self) -> tuple:
        return self._rref[0]

    @property
    def pivots(self) -> tuple:
        return self._rref[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.field == other.field and self.N == other.N and self.echelon == other.echelon

    def __hash__(self) -> int:
        return hash((self.N, self.echelon))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, N={self.N}, field={self.field!r})"

    def contains(self, x: Sequence) -> bool:
        x = [self.field(a) for a in x]
        if not any(x):
            return True
        return in_span(self.echelon, x, self.field)

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(v) for v in other.basis)

    def coordinates(self, x: Sequence) -> tuple:
        """Coefficients c with x = sum c_i basis_i."""
        F = self.field
        cols = list(zip(*self.basis))
        aug = [list(c) + [F(a)] for c, a in zip(cols, x)]
        R, piv = rref(aug, F)
        L = self.dim
        if L in piv:
            raise ValueError("vector not in subspace")
        c = [F.zero] * L
        for row, p in zip(R, piv):
            c[p] = row[L]
        return tuple(c)

    @cached_property
    def equations(self) -> tuple[tuple, ...]:
        """Rows of a defining matrix A with V = {x : A x = 0}."""
        if not self.basis:
            return tuple(tuple(self.field.one if i == j else self.field.zero
                               for j in range(self.N)) for i in range(self.N))
        return tuple(kernel_basis(self.basis, self.field, self.N))

    @cached_property
    def plucker(self) -> tuple:
        return plucker_vector(self.basis, self.field)

    @cached_property
    def _heights(self):
        return _vector_heights(self.plucker, self.field)

    @property
    def H(self) -> Height:
        return self._heights[0]

    @property
    def HH(self) -> Height:
        return self._heights[1]

    @cached_property
    def ring_basis(self) -> tuple[tuple, ...]:
        """Basis of the lattice V intersected with R^N (saturated)."""
        F = self.field
        if self.dim == self.N:
            return tuple(tuple(F.ring_one if i == j else F.ring_zero for j in range(self.N))
                         for i in range(self.N))
        if self.dim == 0:
            return ()
        A, _ = ring_rows(self.equations, F)
        return tuple(tuple(v) for v in ring_kernel(A, self.N, F))

    def intersect(self, other: "Subspace") -> "Subspace":
        eqs = list(self.equations) + list(other.equations)
        return Subspace.from_equations(eqs, self.field, self.N)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.spanned_by(list(self.basis) + list(other.basis), self.field, self.N)


def subspace_height(V: Subspace) -> tuple[Height, Height]:
    """(H(V), HH(V)) from the primitive Plucker vector."""
    return V.H, V.HH


def subspace_height_from_equations(A: Sequence[Sequence], field: Field, N: int
                                   ) -> tuple[Height, Height]:
    """Heights of {x : A x = 0} computed from A alone (duality)."""
    R, _ = rref(A, field)
    if not R:
        return _one(field), _one(field)
    return _vector_heights(plucker_vector(R, field), field)


def matrix_height(M: Sequence[Sequence], field: Field | None = None) -> Height:
    """H of a matrix viewed as one long vector."""
    flat = [a for row in M for a in row]
    return height_H(flat, field)


def poly_height(P) -> tuple[Height, Height]:
    """(H, h) of the coefficient vector of a nonzero polynomial."""
    coeffs = P.coefficient_vector()
    if not any(coeffs):
        raise ValueError("height of the zero polynomial")
    return height_H(coeffs, P.field), height_h(coeffs, P.field)


def log_height_text(h: Height, digits: int = 30) -> str:
    """Decimal text of log h (exact for function fields)."""
    if h.is_ff:
        return str(h.exp)
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(mpmath.log(mpmath.mpf(h.sq)) / 2, digits)
