import random

import mpmath
import pytest

from quadzeros.bounds import bound_evaluator, bound_names, bound_params
from quadzeros.constants import ConstantsTable, field_constant
from quadzeros.fields import QQ, FunctionField
from quadzeros.heights import Height, iv_hi, iv_lo
from quadzeros.oracle import oracle_bound

@pytest.fixture(autouse=True)
def _precision():
    with mpmath.workdps(60):
        yield


TQ = ConstantsTable.for_field(QQ)
T3 = ConstantsTable.for_field(FunctionField(3))


def _close(iv, value, rel=mpmath.mpf("1e-25")):
    lo, hi = iv_lo(iv), iv_hi(iv)
    tol = rel * max(1, abs(value))
    return lo - tol <= value <= hi + tol


def test_exact_small_constants():
    assert TQ.exact("B", 1) == 1
    assert all(TQ.exact("C", l) == 1 for l in range(1, 8))
    assert TQ.exact("A", 1) == 1
    assert T3.exact("C", 4) == 1 and T3.exact("E", 4) == 1


def test_A_q_is_j_sqrt2():
    for j in range(2, 12):
        iv = field_constant(TQ, "A", j)
        with mpmath.workdps(60):
            target = j * mpmath.sqrt(2)
        assert iv_lo(iv) <= target <= iv_hi(iv)
        assert iv_hi(iv) - iv_lo(iv) < mpmath.mpf("1e-12")


def test_field_descriptors():
    assert TQ.delta == 1 and T3.delta == 0
    d = T3.describe()
    assert d["genus"] == 0 and d["n_points"] == 4 and d["class_number"] == 1


def test_nondecreasing():
    for name in ("B", "C", "A"):
        vals = [iv_lo(TQ.log(name, j)) for j in range(1, 12)]
        assert vals == sorted(vals)
    vals = [iv_lo(T3.log("A", j)) for j in range(1, 12)]
    assert vals == sorted(vals)


@pytest.mark.parametrize("table", [TQ, T3])
def test_T_finite_in_log_space(table):
    for L in range(1, 11):
        for j in range(1, 12):
            iv = table.log("T", L, j)
            assert mpmath.isfinite(iv_lo(iv)) and mpmath.isfinite(iv_hi(iv))


def test_bound_examples():
    one = Height(sq=1)
    iv = bound_evaluator("miss_hyper_bnd", {"L": 2, "M": 1, "HF": one, "HV": one}, TQ)
    assert iv_lo(iv) == iv_lo(TQ.log("T", 2, 2))
    iv = bound_evaluator("sing_height", {"r": 0, "HF": Height(sq=9), "HV": Height(sq=4)}, TQ)
    assert _close(iv, mpmath.log(2))
    iv = bound_evaluator("iso_bound", {"L": 4, "l": 1, "HF": Height(exp=2), "HV": Height(exp=1)},
                         T3)
    assert iv_lo(iv) == iv_hi(iv) == 4
    with pytest.raises(ValueError):
        bound_evaluator("no_such_bound", {}, TQ)


def _random_params(rng, kind, ff):
    L = rng.randint(1, 6)
    m = rng.randint(1, L)
    if kind == "ht_max_isot":
        L = rng.randint(2, 6)
        m = rng.randint(1, L - 1)
    vals = {"L": L, "m": m, "l": rng.randint(1, L), "k": rng.randint(1, m),
            "M": rng.randint(0, 3), "N": L + rng.randint(0, 2), "D": rng.randint(1, 5),
            "r": rng.randint(0, L), "lam": rng.randint(1, 3), "degP": rng.randint(1, 4),
            "degQ": 2}
    vals["degPQ"] = vals["degP"] + 2
    out = {}
    for name in bound_params(kind):
        if name in vals:
            out[name] = vals[name]
        elif ff:
            out[name] = Height(exp=rng.randint(0, 4))
        else:
            out[name] = Height(sq=rng.randint(1, 400))
    return out


@pytest.mark.parametrize("kind", bound_names())
def test_bounds_agree_with_oracle(kind):
    rng = random.Random(kind)
    for ff, table, desc in ((False, TQ, {"kind": "Q"}), (True, T3, {"kind": "Fq_t", "q": 3})):
        for _ in range(15):
            p = _random_params(rng, kind, ff)
            iv = bound_evaluator(kind, p, table)
            ref = oracle_bound(kind, {k: (v.to_json() if isinstance(v, Height) else v)
                                      for k, v in p.items()}, desc)
            assert _close(iv, ref), (kind, p, iv, ref)
