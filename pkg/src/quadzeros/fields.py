"""Exact scalars: the rationals and rational function fields F_p(t), p an odd prime.

Both fields expose the same small interface (``zero``, ``one``, coercion via
``field(x)``, ``parse``/``format``) plus helpers for their rings of integers
(Z and F_p[t]) that the height and search code relies on.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import SchemaError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


class GFPoly:
    """Polynomial over GF(p), coefficients stored low degree first."""

    __slots__ = ("p", "c")

    def __init__(self, coeffs: Iterable[int], p: int):
        c = [int(a) % p for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.p = p
        self.c = tuple(c)

    @classmethod
    def const(cls, a: int, p: int) -> "GFPoly":
        return cls((a,), p)

    @classmethod
    def monomial(cls, k: int, p: int, a: int = 1) -> "GFPoly":
        return cls((0,) * k + (a,), p)

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, GFPoly):
            return self.p == other.p and self.c == other.c
        if isinstance(other, int):
            return self.c == GFPoly.const(other, self.p).c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("GFPoly", self.p, self.c))

    def _coerce(self, other) -> "GFPoly":
        if isinstance(other, GFPoly):
            if other.p != self.p:
                raise ValueError("characteristic mismatch")
            return other
        if isinstance(other, int):
            return GFPoly.const(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = max(len(self.c), len(o.c))
        a = self.c + (0,) * (n - len(self.c))
        b = o.c + (0,) * (n - len(o.c))
        return GFPoly((x + y for x, y in zip(a, b)), self.p)

    __radd__ = __add__

    def __neg__(self):
        return GFPoly((-x for x in self.c), self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.c or not o.c:
            return GFPoly((), self.p)
        out = [0] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(o.c):
                    out[i + j] += x * y
        return GFPoly(out, self.p)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = GFPoly.const(1, self.p)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.c:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        r = list(self.c)
        inv = pow(o.lc, -1, p)
        dq = len(r) - len(o.c)
        if dq < 0:
            return GFPoly((), p), self
        q = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            coef = r[k + len(o.c) - 1] * inv % p
            q[k] = coef
            if coef:
                for j, y in enumerate(o.c):
                    r[k + j] = (r[k + j] - coef * y) % p
        return GFPoly(q, p), GFPoly(r, p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> "GFPoly":
        if not self.c:
            return self
        inv = pow(self.lc, -1, self.p)
        return GFPoly((x * inv for x in self.c), self.p)

    def __call__(self, a: int) -> int:
        acc = 0
        for x in reversed(self.c):
            acc = (acc * a + x) % self.p
        return acc

    def key(self) -> tuple:
        """Sort key: by degree, then coefficients from the top down."""
        return (len(self.c), tuple(reversed(self.c)))

    def __repr__(self) -> str:
        return f"GFPoly({self}, p={self.p})"

    def __str__(self) -> str:
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            if k == 0:
                terms.append(str(a))
            else:
                mono = "t" if k == 1 else f"t^{k}"
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(terms)

    @staticmethod
    def gcd(a: "GFPoly", b: "GFPoly") -> "GFPoly":
        while b:
            a, b = b, a % b
        return a.monic()


class RatFunc:
    """Element of F_p(t) in canonical form: monic denominator, coprime parts."""

    __slots__ = ("num", "den")

    def __init__(self, num: GFPoly, den: GFPoly | None = None, *, _canonical: bool = False):
        p = num.p
        if den is None:
            den = GFPoly.const(1, p)
        if not _canonical:
            if not den:
                raise ZeroDivisionError("zero denominator")
            if not num:
                den = GFPoly.const(1, p)
            else:
                g = GFPoly.gcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
                inv = pow(den.lc, -1, p)
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @property
    def p(self) -> int:
        return self.num.p

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, GFPoly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc(GFPoly.const(other, self.p))
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash(("RatFunc", self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o:
            raise ZeroDivisionError("division by zero in F_p(t)")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if k < 0:
            return (RatFunc(GFPoly.const(1, self.p)) / self) ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _canonical=True)

    def __repr__(self) -> str:
        return f"RatFunc({self})"

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        n = str(self.num)
        if len(self.num.c) > 1 and " " in n:
            n = f"({n})"
        return f"{n}/({self.den})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def parse_expression(text: str, atom, lift):
    """Recursive-descent evaluation of an arithmetic expression.

    ``atom(name)`` maps identifiers to values and ``lift(n)`` maps integer
    literals.  Values only need the usual arithmetic operators.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SchemaError(f"cannot parse {text!r} at position {pos}")
        pos = m.end()
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else (None, None)

    def take():
        nonlocal i
        tok = peek()
        i += 1
        return tok

    def expr():
        val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while True:
            tok = peek()
            if tok in (("op", "*"), ("op", "/")):
                take()
                rhs = unary()
                val = val * rhs if tok[1] == "*" else val / rhs
            elif tok[0] in ("num", "name") or tok == ("op", "("):
                val = val * unary()  # implicit product, e.g. "2t" or "X1X2"
            else:
                return val

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = primary()
        if peek() == ("op", "^"):
            take()
            kind, e = take()
            if kind != "num":
                raise SchemaError(f"exponent must be a nonnegative integer in {text!r}")
            return base ** e
        return base

    def primary():
        kind, val = take()
        if kind == "num":
            return lift(val)
        if kind == "name":
            return atom(val)
        if (kind, val) == ("op", "("):
            v = expr()
            if take() != ("op", ")"):
                raise SchemaError(f"unbalanced parentheses in {text!r}")
            return v
        raise SchemaError(f"unexpected token {val!r} in {text!r}")

    if not tokens:
        raise SchemaError("empty expression")
    out = expr()
    if i != len(tokens):
        raise SchemaError(f"trailing input in {text!r}")
    return out


class RationalField:
    """The field Q, with ring of integers Z."""

    kind = "Q"
    delta = 1
    characteristic = 0
    # descriptor of Q as a number field
    d = 1
    disc = 1
    r1 = 1
    r2 = 0
    omega = 2
    q = None
    genus = None

    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("Q")

    def __repr__(self) -> str:
        return "QQ"

    def descriptor(self) -> dict:
        return {"kind": "Q"}

    def parse(self, text: str) -> Fraction:
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            pass

        def atom(name):
            raise SchemaError(f"unexpected symbol {name!r} in rational scalar {text!r}")

        val = parse_expression(text, atom, Fraction)
        return Fraction(val)

    @staticmethod
    def format(x: Fraction) -> str:
        return str(x)

    # --- ring of integers -------------------------------------------------
    ring_one = 1
    ring_zero = 0

    @staticmethod
    def ring_size(a: int) -> int:
        return abs(a)

    @staticmethod
    def ring_gcd(a: int, b: int) -> int:
        return math.gcd(a, b)

    @staticmethod
    def ring_lcm(a: int, b: int) -> int:
        return a * b // math.gcd(a, b)

    @staticmethod
    def ring_is_unit(a: int) -> bool:
        return abs(a) == 1

    @staticmethod
    def ring_normalizer(a: int) -> int:
        """Unit u such that u*a is the normalized associate (sign +)."""
        return -1 if a < 0 else 1

    @staticmethod
    def ring_key(a: int) -> tuple:
        return (abs(a), a < 0)

    @staticmethod
    def ring_divexact(a: int, b: int):
        q, r = divmod(a, b)
        return q if r == 0 else None

    @staticmethod
    def ring_sqrt(a: int):
        if a < 0:
            return None
        s = math.isqrt(a)
        return s if s * s == a else None

    @staticmethod
    def numden(x: Fraction) -> tuple[int, int]:
        return x.numerator, x.denominator

    @staticmethod
    def from_ring(a: int) -> Fraction:
        return Fraction(a)

    def ring_shell(self, s: int) -> list[int]:
        """Ring elements of size exactly s (size = absolute value)."""
        return [0] if s == 0 else [s, -s]

    def ring_box(self, s: int) -> list[int]:
        return list(range(-s, s + 1))

    @staticmethod
    def level_to_log(level: int):
        """Points of level s have H = s."""
        return level

    def primitive(self, vec: Sequence[Fraction]) -> tuple[int, ...] | None:
        """Primitive integer representative, first nonzero entry positive."""
        den = reduce(math.lcm, (Fraction(x).denominator for x in vec), 1)
        ints = [int(Fraction(x) * den) for x in vec]
        g = reduce(math.gcd, ints, 0)
        if g == 0:
            return None
        first = next(a for a in ints if a)
        if first < 0:
            g = -g
        return tuple(a // g for a in ints)


class FunctionField:
    """The rational function field F_p(t) over a prime field of odd order."""

    kind = "Fq_t"
    delta = 0
    d = 1
    genus = 0
    eff_degree = 1
    class_number = 1
    disc = None
    omega = None

    def __init__(self, q: int):
        if not isinstance(q, int) or q == 2 or (q % 2 == 0 and q > 0):
            raise SchemaError("characteristic 2 unsupported")
        if not _is_prime(q):
            raise SchemaError(f"q = {q} must be an odd prime")
        self.q = q
        self.p = q
        self.characteristic = q
        self.n_points = q + 1
        self.zero = RatFunc(GFPoly((), q))
        self.one = RatFunc(GFPoly((1,), q))
        self.ring_one = GFPoly((1,), q)
        self.ring_zero = GFPoly((), q)

    def __eq__(self, other) -> bool:
        return isinstance(other, FunctionField) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("Fq_t", self.q))

    def __repr__(self) -> str:
        return f"F_{self.q}(t)"

    def descriptor(self) -> dict:
        return {"kind": "Fq_t", "q": self.q}

    @property
    def t(self) -> RatFunc:
        return RatFunc(GFPoly((0, 1), self.q))

    def __call__(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            if x.p != self.q:
                raise ValueError("characteristic mismatch")
            return x
        if isinstance(x, GFPoly):
            return RatFunc(x)
        if isinstance(x, int):
            return RatFunc(GFPoly.const(x, self.q))
        if isinstance(x, Fraction):
            return self(x.numerator) / self(x.denominator)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def parse(self, text: str) -> RatFunc:
        def atom(name):
            if name == "t":
                return self.t
            raise SchemaError(f"unexpected symbol {name!r} in scalar {text!r}")

        try:
            return self(parse_expression(text, atom, self))
        except ZeroDivisionError as exc:
            raise SchemaError(f"division by zero in {text!r}") from exc

    @staticmethod
    def format(x: RatFunc) -> str:
        return str(x)

    # --- ring F_p[t] -------------------------------------------------------
    @staticmethod
    def ring_size(a: GFPoly) -> int:
        """deg + 1, so that the zero polynomial has size 0."""
        return len(a.c)

    @staticmethod
    def ring_gcd(a: GFPoly, b: GFPoly) -> GFPoly:
        return GFPoly.gcd(a, b)

    @staticmethod
    def ring_lcm(a: GFPoly, b: GFPoly) -> GFPoly:
        return (a * b // GFPoly.gcd(a, b)).monic()

    @staticmethod
    def ring_is_unit(a: GFPoly) -> bool:
        return a.degree == 0

    @staticmethod
    def ring_normalizer(a: GFPoly) -> int:
        return pow(a.lc, -1, a.p) if a else 1

    @staticmethod
    def ring_key(a: GFPoly) -> tuple:
        return a.key()

    @staticmethod
    def ring_divexact(a: GFPoly, b: GFPoly):
        q, r = divmod(a, b)
        return q if not r else None

    @staticmethod
    def ring_sqrt(a: GFPoly):
        """Square root in F_p[t], or None."""
        p = a.p
        if not a:
            return a
        if a.degree % 2:
            return None
        lc = a.lc
        root = next((r for r in range(1, p) if r * r % p == lc), None)
        if root is None:
            return None
        e = a.degree // 2
        s = [0] * (e + 1)
        s[e] = root
        inv2 = pow(2 * root, -1, p)
        for k in range(e - 1, -1, -1):
            acc = a.c[e + k]
            for i in range(k + 1, e + 1):
                j = e + k - i
                if k < j <= e:
                    acc -= s[i] * s[j]
            s[k] = acc * inv2 % p
        cand = GFPoly(s, p)
        return cand if cand * cand == a else None

    @staticmethod
    def numden(x: RatFunc) -> tuple[GFPoly, GFPoly]:
        return x.num, x.den

    @staticmethod
    def from_ring(a: GFPoly) -> RatFunc:
        return RatFunc(a)

    def ring_shell(self, s: int) -> list[GFPoly]:
        """Polynomials of size exactly s, i.e. degree s - 1."""
        if s == 0:
            return [self.ring_zero]
        return [GFPoly(lower + (top,), self.q)
                for top in range(1, self.q)
                for lower in _all_tuples(self.q, s - 1)]

    def ring_box(self, s: int) -> list[GFPoly]:
        return [GFPoly(c, self.q) for c in _all_tuples(self.q, s)]

    @staticmethod
    def level_to_log(level: int):
        """Points of level s have H = e^(s-1)."""
        return level - 1

    def primitive(self, vec: Sequence[RatFunc]) -> tuple[GFPoly, ...] | None:
        """Primitive polynomial representative, first nonzero entry monic."""
        q = self.q
        vec = [self(x) for x in vec]
        den = GFPoly((1,), q)
        for x in vec:
            den = self.ring_lcm(den, x.den)
        polys = [x.num * (den // x.den) for x in vec]
        g = GFPoly((), q)
        for a in polys:
            g = GFPoly.gcd(g, a) if a else g
        if not g:
            return None
        polys = [a // g for a in polys]
        first = next(a for a in polys if a)
        inv = pow(first.lc, -1, q)
        return tuple(a * inv for a in polys)


def _all_tuples(q: int, n: int):
    if n == 0:
        yield ()
        return
    for rest in _all_tuples(q, n - 1):
        for a in range(q):
            yield rest + (a,)


QQ = RationalField()


def field_from_descriptor(desc) -> RationalField | FunctionField:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise SchemaError("field: expected an object with a 'kind' entry")
    if desc["kind"] == "Q":
        return QQ
    if desc["kind"] == "Fq_t":
        q = desc.get("q")
        if not isinstance(q, int):
            raise SchemaError("field.q: expected an integer")
        return FunctionField(q)
    raise SchemaError(f"field.kind: unsupported field kind {desc['kind']!r}")


Field = RationalField | FunctionField
