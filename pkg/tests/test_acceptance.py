"""Acceptance run: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even when
output capture is on).
"""

from __future__ import annotations

import math
import random
import time
from collections import Counter

import mpmath
import pytest

from quadzeros.bounds import bound_evaluator
from quadzeros.cli import _document, run
from quadzeros.constants import ConstantsTable, field_constant
from quadzeros.corpus import main_corpus, random_ff_problem, random_quad1
from quadzeros.errors import PreconditionError, SearchBudgetExceeded
from quadzeros.fields import QQ, FunctionField
from quadzeros.heights import Height, Subspace, height_h, iv_hi, iv_lo, poly_height
from quadzeros.linalg import rank
from quadzeros.oracle import (_Ring, certify, minimal_isotropic_subspace,
                              minimal_nonsingular_zero, minimal_zero, oracle_bound, tamper)
from quadzeros.problem import problem_from_json
from quadzeros.quadspace import QuadSpace
from quadzeros.smallzeros import independent_zeros, isotropic_flags, quad1_zero

import suites

MAIN_SEED = 2026
FF3 = {"kind": "Fq_t", "q": 3}


@pytest.fixture(scope="module")
def line(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def emit(n: int, ok: bool, detail: str) -> None:
        text = f"[criterion {n:2d}] {'PASS' if ok else 'FAIL'}: {detail}"
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print("\n" + text, flush=True)
        else:  # pragma: no cover
            print(text)
    return emit


@pytest.fixture(scope="module")
def corpus():
    return main_corpus(200, MAIN_SEED)


def _elapsed(t0: float) -> float:
    return time.perf_counter() - t0


def test_c01_height_axioms(line):
    t0 = time.perf_counter()
    n, fails = suites.height_axioms(500)
    dt = _elapsed(t0)
    ok = not fails and dt < 30
    line(1, ok, f"{n} instances, {len(fails)} failures, {dt:.1f}s (limit 30s)")
    assert ok, fails[:5]


def test_c02_height_lemmas(line):
    t0 = time.perf_counter()
    results = {
        "sum_height": suites.sum_height_lemma(200),
        "spanning": suites.spanning_lemma(200),
        "gram": suites.gram_lemma(200),
        "intersection": suites.intersection_lemma(200),
        "strong_intersection": suites.intersection_lemma(200, strong=True),
    }
    dt = _elapsed(t0)
    bad = {k: len(f) for k, (_, f) in results.items() if f}
    ok = not bad and dt < 60
    counts = ", ".join(f"{k} {n}" for k, (n, _) in results.items())
    line(2, ok, f"{counts}; violations {bad or 0}; {dt:.1f}s (limit 60s)")
    assert ok


def test_c03_constants(line):
    tq = ConstantsTable.for_field(QQ)
    t3 = ConstantsTable.for_field(FunctionField(3))
    checks = {
        "B_Q(1)=1": tq.exact("B", 1) == 1,
        "C_Q(l)=1": all(tq.exact("C", l) == 1 for l in range(1, 11)),
        "A_Q(1)=1": tq.exact("A", 1) == 1,
        "C_ff=1, E_ff=1": all(t3.exact("C", l) == 1 and t3.exact("E", l) == 1
                              for l in range(1, 11)),
    }
    with mpmath.workdps(60):
        widths_ok = True
        for j in range(2, 16):
            iv = field_constant(tq, "A", j)
            lo, hi = iv_lo(iv), iv_hi(iv)
            target = j * mpmath.sqrt(2)
            widths_ok &= lo <= target <= hi and hi - lo < mpmath.mpf("1e-12")
        checks["A_Q(j)=j*sqrt2"] = bool(widths_ok)
        finite = True
        for table in (tq, t3):
            for L in range(1, 11):
                for j in range(1, 12):
                    iv = table.log("T", L, j)
                    finite &= bool(mpmath.isfinite(iv_lo(iv)) and mpmath.isfinite(iv_hi(iv)))
        checks["T_K finite for L<=10"] = finite
    bad = [k for k, v in checks.items() if not v]
    line(3, not bad, f"{len(checks)} checks, failed: {bad or 'none'}")
    assert not bad


def _zeros_doc(obj):
    pr = problem_from_json(obj)
    return pr, _document("zeros", pr, {}, run("zeros", pr, {}))


def test_c04_main_theorem(line, corpus):
    t0 = time.perf_counter()
    fails = []
    stats = Counter()
    for k, obj in enumerate(corpus):
        pr = problem_from_json(obj)
        qs = QuadSpace(pr.V, pr.F)
        res = independent_zeros(qs, pr.S)
        pts = res.points
        if len(pts) != qs.m or rank(pts, QQ) != qs.m:
            fails.append(f"#{k}: {len(pts)} points, rank {rank(pts, QQ)}, m={qs.m}")
        Hs = [max(abs(a) for a in Pprim) for Pprim in (QQ.primitive(p) for p in pts)]
        hs = [height_h(p) for p in pts]
        if Hs != sorted(Hs) or hs != sorted(hs):
            fails.append(f"#{k}: heights not monotone")
        doc = _document("zeros", pr, {}, res.certificate)
        rep = certify(doc)
        if not (res.certificate.passed and rep.passed):
            fails.append(f"#{k}: certificate failed")
        if not any(c["name"].endswith("miss_hyper_bnd") for c in doc["certificate"]["claims"]):
            fails.append(f"#{k}: no explicit T_Q(L, M+1) bound claim")
        # minimality cross-check against full enumeration
        lh = hs[0].log()
        if lh <= 6:
            try:
                z = minimal_zero(obj, lh + 1e-12, budget=3_000_000)
            except SearchBudgetExceeded:
                stats["too large to enumerate"] += 1
                continue
            stats["enumerated"] += 1
            if z is None or math.log(max(abs(a) for a in z)) > lh + 1e-12:
                fails.append(f"#{k}: oracle minimum above h(x1)")
        stats[f"m={qs.m}"] += 1
    dt = _elapsed(t0)
    ok = not fails and dt < 600
    line(4, ok, f"{len(corpus)} instances, {len(fails)} failures, oracle minimality on "
                f"{stats['enumerated']} (skipped {stats['too large to enumerate']} too large), "
                f"{dt:.1f}s (limit 600s)")
    assert ok, fails[:5]


def test_c05_flags(line, corpus):
    t0 = time.perf_counter()
    fails = []
    for k, obj in enumerate(corpus):
        pr = problem_from_json(obj)
        qs = QuadSpace(pr.V, pr.F)
        res = isotropic_flags(qs, pr.S)
        for x, chain in zip(res.points, res.flags):
            if [W.dim for W in chain] != list(range(1, qs.m + 1)):
                fails.append(f"#{k}: chain dimensions")
            for a, b in zip(chain, chain[1:]):
                if not b.contains_subspace(a):
                    fails.append(f"#{k}: chain not nested")
            for W in chain:
                if any(g for row in qs.F.gram(W.basis) for g in row):
                    fails.append(f"#{k}: Gram matrix nonzero")
                if not (W.contains(x) and pr.S.avoids(x)):
                    fails.append(f"#{k}: flag member inside Z_S")
        doc = _document("flags", pr, {}, res.certificate)
        if not (res.certificate.passed and certify(doc).passed):
            fails.append(f"#{k}: certificate failed")
    dt = _elapsed(t0)
    line(5, not fails, f"{len(corpus)} instances, {len(fails)} failures, {dt:.1f}s")
    assert not fails, fails[:5]


def test_c06_quad1(line):
    t0 = time.perf_counter()
    rng = random.Random(6)
    branches = Counter()
    fails = []
    done = rejected = 0
    while done < 300:
        Q, P, i, j = random_quad1(rng)
        try:
            r = quad1_zero(Q, P, i, j)
        except PreconditionError:
            rejected += 1
            continue
        done += 1
        branches[r.branch] += 1
        claim = next(c for c in r.certificate.claims if c.data.get("bound") == "PQ_height")
        params = {"degPQ": (P * Q).degree, "degQ": Q.degree, "degP": P.degree,
                  "HQ": poly_height(Q)[0].to_json()}
        with mpmath.workdps(50):
            bound = oracle_bound("PQ_height", params, {"kind": "Q"})
            lhs = mpmath.log(mpmath.mpf(height_h(r.z).sq)) / 2
        if Q(r.z) != 0 or P(r.z) == 0 or lhs > bound * (1 + mpmath.mpf("1e-20")) \
                or not claim.passed:
            fails.append(f"Q={Q} P={P}")
    dt = _elapsed(t0)
    ok = not fails and min(branches["G1=0"], branches["G1!=0"]) >= 50 and dt < 120
    line(6, ok, f"300 instances ({rejected} unsolvable draws skipped), {len(fails)} failures, "
                f"branches {dict(branches)}, {dt:.1f}s (limit 120s)")
    assert ok, fails[:5]


def test_c07_reduction(line):
    t0 = time.perf_counter()
    n, fails = suites.reduction_suite(500)
    dt = _elapsed(t0)
    ok = not fails and dt < 10
    line(7, ok, f"{n} pairs, {len(fails)} failures, {dt:.2f}s (limit 10s)")
    assert ok, fails[:5]


def test_c08_appendix(line):
    t0 = time.perf_counter()
    fails = []
    stats = Counter()
    for obj in main_corpus(100, 8):
        pr = problem_from_json(obj)
        for cmd in ("basis-outside", "siegel"):
            cert = run(cmd, pr, {})
            if not (cert.passed and certify(_document(cmd, pr, {}, cert)).passed):
                fails.append(f"{cmd} failed")
            stats[cmd] += 1
    rng = random.Random(9)
    for q in (3, 5):
        done = 0
        while done < 20:
            obj = random_ff_problem(rng, q, max_N=4)
            pr = problem_from_json(obj)
            if pr.V.dim > 3:
                continue
            done += 1
            cert = run("ff-orth", pr, {})
            basis = [[pr.field.parse(s) for s in v] for v in cert.outputs["basis"]]
            ortho = all(not pr.F.bilinear(a, b) for i, a in enumerate(basis)
                        for b in basis[i + 1:])
            same = Subspace(basis, pr.field) == pr.V
            if not (ortho and same and cert.passed
                    and certify(_document("ff-orth", pr, {}, cert)).passed):
                fails.append(f"ff-orth q={q} {obj}")
            stats[f"ff-orth F_{q}(t)"] += 1
    dt = _elapsed(t0)
    line(8, not fails, f"{dict(stats)}, {len(fails)} failures, {dt:.1f}s")
    assert not fails, fails[:5]


def test_c09_function_field(line):
    t0 = time.perf_counter()
    rng = random.Random(2)
    R = _Ring(FF3)
    stats = Counter()
    fails = []
    checked = 0
    while checked < 50:
        obj = random_ff_problem(rng, 3, max_N=4)
        try:
            if minimal_zero(obj, 2, budget=2_000_000) is None:
                stats["anisotropic draws skipped"] += 1
                continue
        except SearchBudgetExceeded:
            stats["oracle budget skips"] += 1
            continue
        pr = problem_from_json(obj)
        qs = QuadSpace(pr.V, pr.F)
        HF = R.H([R.parse(a) for row in obj["F"] for a in row])
        V_rows = obj.get("V") or [["1" if i == j else "0" for j in range(pr.N)]
                                   for i in range(pr.N)]
        HV = R.subspace_heights([[R.parse(a) for a in v] for v in V_rows])[0]
        L = qs.L
        try:
            found = []
            for l in range(1, qs.m + 1):
                b = oracle_bound("iso_bound", {"L": L, "l": l, "HF": HF, "HV": HV}, FF3)
                res = minimal_isotropic_subspace(obj, l, float(b) + 1e-9, budget=3_000_000)
                found.append((l, res, b))
            ns = None
            if qs.r > 0 and qs.omega > 0:
                b2 = oracle_bound("smallzero2", {"L": L, "HF": HF, "HV": HV}, FF3)
                ns = (minimal_nonsingular_zero(obj, float(b2) + 1e-9, budget=3_000_000), b2)
        except SearchBudgetExceeded:
            stats["oracle budget skips"] += 1
            continue
        checked += 1
        for l, res, b in found:
            stats["iso_bound checks"] += 1
            if res is None or res[1] > b + mpmath.mpf("1e-20"):
                fails.append(f"iso_bound l={l} {obj}")
        if ns is not None:
            stats["smallzero2 checks"] += 1
            if ns[0] is None:
                fails.append(f"smallzero2 {obj}")
        if qs.lam:
            stats["fnct_rad_ht checks"] += 1
            rad = [[pr.field.format(a) for a in v] for v in qs.radical.basis]
            Hrad = R.subspace_heights([[R.parse(a) for a in v] for v in rad])[0]
            b3 = oracle_bound("fnct_rad_ht", {"r": qs.r, "HF": HF, "HV": HV}, FF3)
            if int(Hrad["exp"]) > b3:
                fails.append(f"fnct_rad_ht {obj}")
    dt = _elapsed(t0)
    ok = not fails and dt < 600
    line(9, ok, f"{checked} isotropic instances, {dict(stats)}, {len(fails)} failures, "
                f"{dt:.1f}s (limit 600s)")
    assert ok, fails[:5]


def test_c10_fault_injection(line):
    docs = []
    for obj in main_corpus(20, 10):
        pr = problem_from_json(obj)
        for cmd in ("solve", "zeros", "flags", "basis-outside"):
            docs.append(_document(cmd, pr, {}, run(cmd, pr, {})))
    clean = sum(certify(d).passed for d in docs)
    rng = random.Random(10)
    caught = Counter()
    missed = Counter()
    for what in ("point", "height", "bound"):
        for k in range(20):
            bad = tamper(rng.choice(docs), what, k)
            (missed if certify(bad).passed else caught)[what] += 1
    ok = not missed and clean == len(docs)
    line(10, ok, f"caught {dict(caught)}, false passes {sum(missed.values())}, "
                 f"untampered {clean}/{len(docs)} pass")
    assert ok
