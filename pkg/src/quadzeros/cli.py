"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .bounds import iv_text
from .certs import Certificate, check_claim, mat_json
from .constants import ConstantsTable
from .errors import BoundFailure, QuadZerosError, SchemaError
from .fields import QQ, FunctionField
from .heights import IV
from .oracle import certify
from .problem import Problem, canonical, load_problem, problem_json
from .quadspace import QuadSpace
from .smallzeros import (avoidance_polynomial, basis_outside, independent_zeros,
                         isotropic_flags, orth_basis_ff, siegel_basis, small_zero_avoiding)

COMMANDS = ("solve", "zeros", "flags", "basis-outside", "siegel", "witt", "constants",
            "oracle-verify", "ff-orth", "generate")


def cap_to_level(cap: float | None, field) -> int | None:
    """Search level covering all points with log height <= cap."""
    if cap is None:
        return None
    if field.kind == "Fq_t":
        return int(math.floor(cap)) + 1
    return max(int(math.floor(math.exp(cap) * (1 + 1e-12))), 1)


def _settings(args, problem: Problem) -> dict:
    opts = dict(problem.options)
    for key in ("cap", "budget", "slack"):
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def _quadspace(problem: Problem, opts: dict) -> QuadSpace:
    if problem.F is None:
        raise SchemaError("F: this command needs a quadratic form")
    kw = {"cap": cap_to_level(opts.get("cap"), problem.field)}
    if "budget" in opts:
        kw["budget"] = opts["budget"]
    if "slack" in opts:
        kw["slack"] = opts["slack"]
    return QuadSpace(problem.V, problem.F, **kw)


def _kw(opts: dict) -> dict:
    return {k: opts[k] for k in ("budget", "slack") if k in opts}


def _witt_certificate(qs: QuadSpace) -> Certificate:
    K = qs.field
    w = qs.witt
    claims = list(w.claims)
    claims.append(check_claim("dimensions add up", w.lam + 2 * w.omega + len(w.anisotropic) == qs.L))
    outputs = {
        "lambda": w.lam, "omega": w.omega, "m": w.m, "r": qs.r,
        "radical": mat_json(w.radical, K),
        "pairs": [[mat_json([x], K)[0], mat_json([y], K)[0]] for x, y in w.pairs],
        "anisotropic": mat_json(w.anisotropic, K),
        "anisotropic_certified_up_to_level": w.search_cap,
    }
    return Certificate("witt", outputs, claims)


def run(name: str, problem: Problem, opts: dict) -> Certificate:
    if name == "solve":
        qs = _quadspace(problem, opts)
        P, chosen = avoidance_polynomial(problem.S, qs)
        res = small_zero_avoiding(qs, P)
        res.certificate.outputs["chosen"] = chosen
        res.certificate.outputs["P_degree"] = P.degree
        return res.certificate
    if name == "zeros":
        return independent_zeros(_quadspace(problem, opts), problem.S).certificate
    if name == "flags":
        return isotropic_flags(_quadspace(problem, opts), problem.S).certificate
    if name == "basis-outside":
        return basis_outside(problem.V, problem.S, **_kw(opts)).certificate
    if name == "siegel":
        kw = {"slack": opts["slack"]} if "slack" in opts else {}
        return siegel_basis(problem.V, **kw)[1]
    if name == "witt":
        return _witt_certificate(_quadspace(problem, opts))
    if name == "ff-orth":
        if problem.F is None:
            raise SchemaError("F: this command needs a quadratic form")
        return orth_basis_ff(problem.V, problem.F, **_kw(opts))[1]
    raise ValueError(name)


def _document(name: str, problem: Problem, opts: dict, cert: Certificate) -> dict:
    doc = {
        "tool": {"name": "quadzeros", "version": __version__},
        "command": name,
        "problem": problem_json(problem),
        "flags": {k: opts[k] for k in sorted(opts)},
        "certificate": cert.to_json(),
    }
    doc = json.loads(canonical(doc))
    doc["verification"] = certify(doc).to_json()
    return doc


def constants_table(field, L: int, N: int, m: int, M: int, j: int) -> dict:
    t = ConstantsTable.for_field(field)

    def show(name, *args):
        iv = t.log(name, *args)
        val = IV.exp(iv)
        return {"log": iv_text(iv), "value": iv_text(val),
                "exact": str(t.exact(name, *args))}

    rows: dict = {"field": field.descriptor(), "params": {"L": L, "N": N, "m": m, "M": M, "j": j},
                  "delta": t.delta}
    if t.kind == "nf":
        rows["B"] = {str(k): show("B", k) for k in range(0, max(L, 2) + 1)}
    rows["C"] = show("C", L)
    rows["E"] = show("E", L)
    rows["A"] = {str(k): show("A", k) for k in sorted({1, 2, j, M + 1, 2 * j, j + 2})}
    rows["T"] = show("T", L, j)
    rows["T_main"] = show("T", L, M + 1)
    rows["a"] = show("a", L, N, m)
    rows["T1"] = show("T1", L, M, N, m)
    return rows


def _write(doc, out: str | None) -> None:
    text = canonical(doc)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quadzeros",
                                description="Certified small zeros of quadratic forms.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_problem=True):
        if with_problem:
            sp.add_argument("problem", help="problem JSON file")
        sp.add_argument("--cap", type=float, help="log-height cap for searches")
        sp.add_argument("--budget", type=int, help="maximum points visited per search")
        sp.add_argument("--slack", type=float, help="relative slack in bound comparisons")
        sp.add_argument("--seed", type=int, default=0, help="seed (corpus generation only)")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--format", choices=["json"], default="json")

    for name in ("solve", "zeros", "flags", "basis-outside", "siegel", "witt", "ff-orth"):
        common(sub.add_parser(name))
    c = sub.add_parser("constants", help="dump field constants")
    common(c, with_problem=False)
    c.add_argument("problem", nargs="?", help="optional problem file giving the field")
    c.add_argument("--q", type=int, help="use F_q(t) instead of Q")
    for k, d in (("L", 3), ("N", 3), ("m", 1), ("M", 1), ("j", 4)):
        c.add_argument(f"--{k}", type=int, default=d)
    v = sub.add_parser("oracle-verify", help="recheck a certificate file")
    common(v, with_problem=False)
    v.add_argument("certificate", help="certificate JSON file")
    g = sub.add_parser("generate", help="write a seeded random problem corpus")
    common(g, with_problem=False)
    g.add_argument("--count", type=int, default=10)
    g.add_argument("--kind", choices=["main", "ff"], default="main")
    g.add_argument("--dir", required=True, help="output directory")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _dispatch(args)
    except BoundFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.out and exc.trail is not None:
            _write({"error": str(exc), "trail": exc.trail}, args.out)
        return exc.exit_code
    except QuadZerosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


def _dispatch(args) -> int:
    name = args.command
    if name == "constants":
        if args.problem:
            field = load_problem(args.problem).field
        else:
            field = FunctionField(args.q) if args.q else QQ
        _write(constants_table(field, args.L, args.N, args.m, args.M, args.j), args.out)
        return 0
    if name == "oracle-verify":
        try:
            doc = json.loads(Path(args.certificate).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"{args.certificate}: {exc}") from exc
        rep = certify(doc, slack=args.slack)
        _write(rep.to_json(), args.out)
        return 0 if rep.passed else BoundFailure.exit_code
    if name == "generate":
        from .corpus import write_corpus
        paths = write_corpus(args.dir, args.kind, args.count, args.seed)
        print("\n".join(str(p) for p in paths))
        return 0
    problem = load_problem(args.problem)
    opts = _settings(args, problem)
    cert = run(name, problem, opts)
    doc = _document(name, problem, opts, cert)
    _write(doc, args.out)
    if not cert.passed or not doc["verification"]["pass"]:
        return BoundFailure.exit_code
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
