"""Small isotropic vectors of a rational quadratic form that avoid a hypersurface.

The form is x1^2 + x2^2 - x3^2 - x4^2 (Witt index 2) and the zeros must miss
x1*x2 = 0.  The script prints the independent zeros, their flags, the bound
claims from the certificate, and an independent recheck by the oracle.
"""

from quadzeros import (QQ, AvoidanceSystem, MultiPoly, QuadForm, QuadSpace, Subspace,
                       height_h, independent_zeros, isotropic_flags)
from quadzeros.cli import _document
from quadzeros.oracle import certify, minimal_zero
from quadzeros.problem import problem_from_json

N = 4
F = QuadForm([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]], QQ)
V = Subspace.full(QQ, N)
X = [MultiPoly.var(i, N, QQ) for i in range(N)]
S = AvoidanceSystem([[X[0] * X[1]]], N, QQ)

qs = QuadSpace(V, F)
print(f"dim V = {qs.L}, radical dim = {qs.lam}, Witt index = {qs.omega}, m = {qs.m}")

zeros = independent_zeros(qs, S)
for n, x in enumerate(zeros.points, start=1):
    print(f"x{n} = {[str(a) for a in x]}   h = {height_h(x)}")

for c in zeros.certificate.claims:
    if c.kind == "bound":
        print(f"  {c.name:28s} {'ok' if c.passed else 'VIOLATED'}  "
              f"log lhs {c.data['lhs_log'][:10]}  log bound {c.data['bound_log'][0][:10]}")

flags = isotropic_flags(qs, S)
for n, chain in enumerate(flags.flags, start=1):
    print(f"flag through x{n}: dims {[W.dim for W in chain]}, "
          f"heights {[str(W.HH) for W in chain]}")

# independent recheck: the oracle never calls the library's algorithms
obj = {"field": {"kind": "Q"}, "N": N, "F": [[str(a) for a in r] for r in F.matrix],
       "S": [[[[[1, 1, 0, 0], "1"]]]]}
problem = problem_from_json(obj)
report = certify(_document("zeros", problem, {}, zeros.certificate))
print("oracle verdict:", "PASS" if report.passed else "FAIL")
print("oracle minimal avoiding zero:", minimal_zero(obj, 2.0))
