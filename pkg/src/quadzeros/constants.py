"""Field constants B, C, A, E, R, T, a, T1.

Every constant is first built as an exact sympy expression (so that, for
example, B(1) over Q simplifies to exactly 1) and then evaluated in
log-space with outward-rounded interval arithmetic.
"""

from __future__ import annotations

import threading
from functools import lru_cache

import sympy as sp

from .heights import IV

_half = sp.Rational(1, 2)


class ConstantsTable:
    """Memoized constants for one global field.

    Number-field parameters: d, disc, r1, r2, omega.  Function-field
    parameters: q, d, genus, eff_degree, n_points, class_number.  Only Q and
    genus-0 rational function fields are backed by exact arithmetic, but the
    formulas accept any values for display.
    """

    def __init__(self, kind: str, **params):
        if kind not in ("nf", "ff"):
            raise ValueError(f"unsupported field kind {kind!r}")
        self.kind = kind
        self.delta = 1 if kind == "nf" else 0
        if kind == "nf":
            self.d = params.get("d", 1)
            self.disc = params.get("disc", 1)
            self.r1 = params.get("r1", 1)
            self.r2 = params.get("r2", 0)
            self.omega = params.get("omega", 2)
        else:
            self.q = params["q"]
            self.d = params.get("d", 1)
            self.genus = params.get("genus", 0)
            self.eff_degree = params.get("eff_degree", 1)
            self.n_points = params.get("n_points", self.q + 1)
            self.class_number = params.get("class_number", 1)
        self._lock = threading.Lock()
        self._log_cache: dict = {}

    @classmethod
    def for_field(cls, field) -> "ConstantsTable":
        return _table_for(field.kind, field.q)

    def describe(self) -> dict:
        if self.kind == "nf":
            return {"kind": "nf", "d": self.d, "disc": self.disc, "r1": self.r1,
                    "r2": self.r2, "omega": self.omega, "delta": self.delta}
        return {"kind": "ff", "q": self.q, "d": self.d, "genus": self.genus,
                "eff_degree": self.eff_degree, "n_points": self.n_points,
                "class_number": self.class_number, "delta": self.delta}

    # ---- exact expressions ------------------------------------------------
    def B(self, j: int):
        """B_K(j); B_K(0) is taken to be 1."""
        if self.kind != "nf":
            raise ValueError("B is only defined for number fields")
        if j == 0:
            return sp.Integer(1)
        d = self.d
        r_real = sp.pi ** (-_half) * sp.gamma(sp.Rational(j, 2) + 1) ** sp.Rational(1, j)
        r_cplx = (2 * sp.pi) ** (-_half) * sp.gamma(j + 1) ** sp.Rational(1, 2 * j)
        return (2 * sp.Integer(abs(self.disc)) ** sp.Rational(1, 2 * d)
                * r_real ** sp.Rational(self.r1, d) * r_cplx ** sp.Rational(2 * self.r2, d))

    def C(self, l: int):
        if self.kind == "nf":
            return ((2 / sp.pi) ** self.r2 * abs(self.disc)) ** sp.Rational(l, 2 * self.d)
        m = self.eff_degree
        return sp.exp(sp.Rational((self.genus - 1 + m) * l, m))

    def E(self, l: int):
        if self.kind == "nf":
            return sp.Integer(1)
        return sp.exp(sp.Rational(self.genus * l, self.d))

    def R(self, j: int):
        if self.kind != "ff":
            raise ValueError("R is only defined for function fields")
        n, h, q = self.n_points, self.class_number, self.q
        return (sp.Rational(n - 1, 2) * ((j - q + 2) * h * sp.sqrt(n)) ** sp.Rational(1, n - 1)
                + h * (n - 1) * sp.sqrt(n))

    def A(self, j: int):
        if self.kind == "nf":
            if self.omega <= j:
                return (j * sp.sqrt(2 ** self.r1 * abs(self.disc))) ** sp.Rational(1, self.d)
            return sp.Integer(1)
        if self.q <= j:
            return sp.exp(self.R(j))
        return sp.Integer(1)

    def T(self, l: int, j: int):
        if self.kind == "nf":
            return (3 ** 3 * sp.Integer(2) ** sp.Rational(21 * l - 21, 2)
                    * sp.Integer(l) ** sp.Rational(27 * l + 51, 2)
                    * self.C(l) ** (9 * l + 14) * self.B(l - 1) ** max(l, 9)
                    * self.A(j + 2) ** 3 * self.A(2 * j) ** 2
                    * sp.Integer(abs(self.disc)) ** sp.Rational(9, 2 * self.d))
        g, d, q = self.genus, self.d, self.q
        return (sp.Integer(q) ** sp.Rational((18 * l * l - 27 * l + 18) * g, d)
                * self.C(l) ** (9 * l + 15) * self.E(l) ** (9 * l + 15)
                * self.A(j + 2) ** 3 * self.A(2 * j) ** 2)

    def a(self, L: int, N: int, m: int):
        k = max(L - m - 1, 0)
        if self.kind == "nf":
            return sp.Integer(2) ** ((2 * m + 1) * k) * self.B(k) ** (2 * k) * sp.Integer(N) ** 2
        return sp.Integer(self.q) ** sp.Rational(k * k * self.genus, self.d)

    def T1(self, L: int, M: int, N: int, m: int):
        return self.a(L, N, m) * self.T(L, M + 1) ** 2

    def exact(self, name: str, *args):
        fn = getattr(self, name, None)
        if name not in _NAMES or fn is None:
            raise ValueError(f"unknown constant {name!r}")
        return fn(*args)

    # ---- interval evaluation ---------------------------------------------
    def log(self, name: str, *args):
        """Outward-rounded interval containing log of the constant."""
        key = (name, args)
        with self._lock:
            hit = self._log_cache.get(key)
        if hit is not None:
            return hit
        if name in _NAMES:
            value = log_interval(self.exact(name, *args))
        else:
            raise ValueError(f"unknown constant {name!r}")
        with self._lock:
            self._log_cache[key] = value
        return value

    def interval(self, name: str, *args):
        return IV.exp(self.log(name, *args))


_NAMES = ("B", "C", "A", "E", "R", "T", "a", "T1")


@lru_cache(maxsize=None)
def _table_for(kind: str, q) -> ConstantsTable:
    if kind == "Q":
        return ConstantsTable("nf")
    return ConstantsTable("ff", q=q)


def field_constant(table: ConstantsTable, kind: str, *args):
    """Interval value of the named constant (e.g. ``"A", 3``)."""
    if kind == "R":
        return value_interval(table.R(*args))
    return table.interval(kind, *args)


def value_interval(e):
    """Interval enclosure of a positive-or-real sympy expression."""
    e = sp.sympify(e)
    if e.is_Integer:
        return IV.mpf(int(e))
    if e.is_Rational:
        return IV.mpf(int(e.p)) / int(e.q)
    if e is sp.pi:
        return IV.pi
    if e is sp.E:
        return IV.e
    if e.is_Add:
        acc = IV.mpf(0)
        for a in e.args:
            acc = acc + value_interval(a)
        return acc
    if e.is_Mul:
        acc = IV.mpf(1)
        for a in e.args:
            acc = acc * value_interval(a)
        return acc
    if e.is_Pow:
        base, ex = e.args
        if ex.is_Integer:
            return value_interval(base) ** int(ex)
        return IV.exp(value_interval(ex) * log_interval(base))
    if isinstance(e, sp.exp):
        return IV.exp(value_interval(e.args[0]))
    if isinstance(e, sp.gamma):
        return IV.gamma(value_interval(e.args[0]))
    if isinstance(e, sp.log):
        return IV.log(value_interval(e.args[0]))
    raise ValueError(f"cannot evaluate {e!r}")


def log_interval(e):
    """Interval enclosure of log(e) for a positive sympy expression."""
    e = sp.sympify(e)
    if e.is_Rational:
        if e <= 0:
            raise ValueError("log of a nonpositive constant")
        return IV.log(IV.mpf(int(e.p))) - IV.log(IV.mpf(int(e.q)))
    if e is sp.pi:
        return IV.log(IV.pi)
    if e is sp.E:
        return IV.mpf(1)
    if e.is_Mul:
        acc = IV.mpf(0)
        for a in e.args:
            acc = acc + log_interval(a)
        return acc
    if e.is_Pow:
        base, ex = e.args
        return value_interval(ex) * log_interval(base)
    if isinstance(e, sp.exp):
        return value_interval(e.args[0])
    if isinstance(e, sp.gamma):
        return IV.log(IV.gamma(value_interval(e.args[0])))
    return IV.log(value_interval(e))
