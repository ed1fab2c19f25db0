"""Named height bounds, evaluated as log-space intervals.

Every bound is the right-hand side of an inequality ``lhs <= rhs``.  An
evaluator receives the constants table of the field and keyword parameters
(integers, plus ``Height`` values for heights) and returns an interval
enclosing ``log rhs``.
"""

from __future__ import annotations

from typing import Callable

import mpmath

from .constants import ConstantsTable
from .heights import IV, Height, iv_hi, iv_lo

DEFAULT_SLACK = 1e-9

_REGISTRY: dict[str, tuple[Callable, tuple[str, ...]]] = {}


def _bound(name: str, *params: str):
    def deco(fn):
        _REGISTRY[name] = (fn, params)
        return fn
    return deco


def _lg(h) -> object:
    if isinstance(h, Height):
        return h.log_iv()
    return IV.mpf(h)


def _ln(n: int):
    return IV.log(IV.mpf(n))


def _r(a, b):
    return IV.mpf(a) / b


def _logG(t: ConstantsTable):
    return (1 - t.delta) * t.log("E", 2) + t.log("A", 2) + t.log("C", 2)


def _q_power(t: ConstantsTable, numer: int):
    """log q^(numer * g / d), zero over Q and at genus 0."""
    if t.kind == "nf" or t.genus == 0:
        return IV.mpf(0)
    return _r(numer * t.genus, t.d) * _ln(t.q)


@_bound("miss_hyper_bnd", "L", "M", "HF", "HV")
def _miss_hyper(t, L, M, HF, HV):
    return t.log("T", L, M + 1) + _r(9 * L + 11, 2) * _lg(HF) + (9 * L + 12) * _lg(HV)


_REGISTRY["4more"] = _REGISTRY["miss_hyper_bnd"]


@_bound("z_bound_miss", "L", "D", "HF", "HV")
def _z_bound_miss(t, L, D, HF, HV):
    return t.log("T", L, D) + _r(9 * L + 11, 2) * _lg(HF) + (9 * L + 12) * _lg(HV)


@_bound("cor_bnd", "L", "M", "N", "m", "HF", "HV")
def _cor_bnd(t, L, M, N, m, HF, HV):
    return t.log("T1", L, M, N, m) + (10 * L - m + 11) * _lg(HF) + (18 * L + 25) * _lg(HV)


@_bound("cor_bnd_1", "L", "M", "N", "m", "k", "HF", "HV")
def _cor_bnd_1(t, L, M, N, m, k, HF, HV):
    out = _r(t.delta * k, 2) * _ln(N) + t.log("C", m) + (1 - t.delta) * t.log("E", m)
    out += t.log("T", L, M + 1) + t.log("T1", L, M, N, m)
    return out + _r(29 * L + 33 - 2 * m, 2) * _lg(HF) + (27 * L + 37) * _lg(HV)


@_bound("gen_bnd_1", "L", "M", "HV")
def _gen_bnd_1(t, L, M, HV):
    return (t.delta * _ln(L) + (1 - t.delta) * t.log("E", L) + t.log("A", M + 1)
            + t.log("C", L) + _lg(HV))


@_bound("PQ_height", "degPQ", "degQ", "degP", "HQ")
def _pq_height(t, degPQ, degQ, degP, HQ):
    return (1 + degQ) * t.log("A", degPQ) + 2 * t.log("A", 2 * degP) + _lg(HQ)


@_bound("x_bound", "HF", "HH")
def _x_bound(t, HF, HH):
    if t.kind == "nf":
        return IV.log(2 * IV.sqrt(2)) + 2 * t.log("B", 1) + _lg(HF) / 2 + _lg(HH)
    return _q_power(t, 4) + _lg(HF) / 2 + _lg(HH)


@_bound("y_bound", "N", "HF", "HH")
def _y_bound(t, N, HF, HH):
    if t.kind == "nf":
        head = IV.log(24 * IV.sqrt(2)) + 2 * _ln(N) + 2 * (t.log("B", 1) + _logG(t))
    else:
        head = _ln(4) + _q_power(t, 4) + 2 * _logG(t)
    return head + _r(3, 2) * _lg(HF) + 3 * _lg(HH)


@_bound("z_bound", "HH")
def _z_bound(t, HH):
    return _ln(2) + _logG(t) + _lg(HH)


@_bound("sing_height", "r", "HF", "HV")
def _sing_height(t, r, HF, HV):
    if t.kind == "nf":
        head = r * t.log("B", r) if r else IV.mpf(0)
    else:
        head = _q_power(t, r)
    return head + _r(r, 2) * _lg(HF) + _lg(HV)


_REGISTRY["fnct_rad_ht"] = _REGISTRY["sing_height"]


@_bound("iso_bound", "L", "l", "HF", "HV")
def _iso_bound(t, L, l, HF, HV):
    return _q_power(t, (L - l) ** 2) + _r(L - l, 2) * _lg(HF) + _lg(HV)


@_bound("ffs1", "L", "l", "HF", "HV")
def _ffs1(t, L, l, HF, HV):
    return _q_power(t, L * L - l + l * l) + _r(L - l, 2) * _lg(HF) + _lg(HV)


@_bound("ffs2", "L", "l", "HF", "HV")
def _ffs2(t, L, l, HF, HV):
    return _ffs1(t, L, l, HF, HV) / l


@_bound("smallzero2", "L", "HF", "HV")
def _smallzero2(t, L, HF, HV):
    return _q_power(t, 2 * L * L - 3 * L + 2) + _r(L - 1, 2) * _lg(HF) + _lg(HV)


@_bound("ns_x", "L", "HFA")
def _ns_x(t, L, HFA):
    """Nonsingular zero of F_A, in the coordinates of a Siegel basis."""
    if t.kind == "ff":
        return _smallzero2(t, L, HFA, 0)
    head = _r(3 * (L - 1), 2) * _ln(2) + _r(L - 1, 2) * _ln(L)
    head += IV.log(IV.mpf(abs(t.disc))) / (2 * t.d) + t.log("B", L - 1)
    return head + _r(L - 1, 2) * _lg(HFA)


@_bound("mho_1", "r", "lam", "D", "HF", "HV")
def _mho_1(t, r, lam, D, HF, HV):
    if t.kind == "nf":
        head = r * t.log("B", r) if r else IV.mpf(0)
    else:
        head = _q_power(t, r)
    return (head + _ln(lam) + t.log("A", D) + t.log("C", lam)
            + _r(r, 2) * _lg(HF) + _lg(HV))


@_bound("siegel_for_V", "L", "HV")
def _siegel(t, L, HV):
    return t.log("C", L) + (1 - t.delta) * t.log("E", L) + _lg(HV)


@_bound("ht_FA", "L", "HF", "HV")
def _ht_fa(t, L, HF, HV):
    head = 2 * t.log("C", L)
    if t.kind == "nf":
        head += 2 * _ln(L)
    else:
        head += 2 * t.log("E", L)
    return head + _lg(HF) + 2 * _lg(HV)


@_bound("ht_PA", "L", "D", "HP", "prod_h")
def _ht_pa(t, L, D, HP, prod_h):
    return t.delta * D * _ln(L) + _lg(HP) + D * _lg(prod_h)


@_bound("ht_Un", "N", "HF", "Hx", "HV")
def _ht_un(t, N, HF, Hx, HV):
    return _r(3 * t.delta, 2) * _ln(N) + _lg(HF) + _lg(Hx) + _lg(HV)


@_bound("ht_max_isot", "L", "m", "HF", "HU")
def _ht_max_isot(t, L, m, HF, HU):
    k = L - m - 1
    if k < 0:
        raise ValueError("ht_max_isot needs m < L")
    if t.kind == "nf":
        head = k * ((2 * m + 1) * _ln(2) + 2 * t.log("B", k) + _lg(HF)) if k else IV.mpf(0)
    else:
        head = _q_power(t, k * k) + k * _lg(HF)
    return head + _lg(HU)


@_bound("5more", "N", "Hx", "HW")
def _five_more(t, N, Hx, HW):
    return _r(t.delta, 2) * _ln(N) + _lg(Hx) + _lg(HW)


@_bound("orth_siegel", "L", "HF", "HV")
def _orth_siegel(t, L, HF, HV):
    return (_r(L * L + L - 2, 4) * t.log("C", L) + _r(L * (L + 1), 2) * _lg(HF)
            + L * _lg(HV))


@_bound("nonvanish", "D")
def _nonvanish(t, D):
    return t.log("A", D)


def bound_names() -> list[str]:
    return sorted(_REGISTRY)


def bound_params(kind: str) -> tuple[str, ...]:
    if kind not in _REGISTRY:
        raise ValueError(f"unknown bound kind {kind!r}")
    return _REGISTRY[kind][1]


def bound_evaluator(kind: str, params: dict, table: ConstantsTable):
    """Interval enclosing log of the right-hand side of bound ``kind``."""
    if kind not in _REGISTRY:
        raise ValueError(f"unknown bound kind {kind!r}")
    fn, names = _REGISTRY[kind]
    missing = [n for n in names if n not in params]
    if missing:
        raise ValueError(f"bound {kind!r} is missing parameters {missing}")
    return fn(table, **{n: params[n] for n in names})


def log_upper(value) -> mpmath.mpf:
    """Upper endpoint of log of a height (Height) or of an interval."""
    if isinstance(value, Height):
        return iv_hi(value.log_iv())
    return iv_hi(value)


def check_bound(lhs, bound_iv, slack: float = DEFAULT_SLACK) -> bool:
    """True iff log(lhs) <= lower(bound) + slack * max(1, |lower(bound)|)."""
    lo = iv_lo(bound_iv)
    return log_upper(lhs) <= lo + mpmath.mpf(slack) * max(mpmath.mpf(1), abs(lo))


def iv_text(x, digits: int = 30) -> list[str]:
    """[lo, hi] as decimal strings."""
    with mpmath.workdps(digits + 10):
        return [mpmath.nstr(iv_lo(x), digits), mpmath.nstr(iv_hi(x), digits)]


_LEVEL_CEILING = 10 ** 18


def level_cap(bound_iv, field) -> int:
    """Largest search level whose points can satisfy ``log h <= bound``."""
    hi = iv_hi(bound_iv)
    if field.kind == "Fq_t":
        return int(mpmath.floor(hi)) + 1
    if hi > 42:
        return _LEVEL_CEILING
    return min(int(mpmath.floor(mpmath.exp(hi) * (1 + mpmath.mpf(10) ** -12))), _LEVEL_CEILING)
