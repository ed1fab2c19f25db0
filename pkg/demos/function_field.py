"""Quadratic spaces over F_3(t): radical, Witt data and an orthogonal basis.

Heights over F_q(t) are exponentials of degrees, so every comparison here is
an integer comparison.
"""

from quadzeros import FunctionField, QuadForm, QuadSpace, Subspace, height_H, orth_basis_ff
from quadzeros.fields import GFPoly
from quadzeros.oracle import minimal_isotropic_subspace, minimal_zero

K = FunctionField(3)
t = K.t
N = 4
# x4 does not occur in the form, so e4 spans the radical
M = [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, t, 0], [0, 0, 0, 0]]
F = QuadForm([[K(a) if isinstance(a, int) else a for a in row] for row in M], K)
V = Subspace.full(K, N)

qs = QuadSpace(V, F)
print(f"L = {qs.L}, radical dim = {qs.lam}, rank = {qs.r}, Witt index = {qs.omega}, m = {qs.m}")
for x, y in qs.witt.pairs:
    print("hyperbolic pair:", [K.format(a) for a in x], [K.format(a) for a in y])

print("radical:", [[K.format(a) for a in v] for v in qs.radical.basis])

basis, cert = orth_basis_ff(V, F)
print("orthogonal basis of V:")
for v in basis:
    print("  ", [K.format(a) for a in v], " H =", height_H(v, K))
for c in cert.claims:
    print(f"  {c.name}: {'ok' if c.passed else 'VIOLATED'}")

obj = {"field": {"kind": "Fq_t", "q": 3}, "N": N,
       "F": [[K.format(a) for a in row] for row in F.matrix],
       "V": [[K.format(a) for a in v] for v in V.basis], "S": []}


def show(point):
    """The oracle keeps polynomials as coefficient tuples, lowest degree first."""
    return [str(GFPoly(list(c), 3)) for c in point]


print("smallest isotropic vector found by enumeration:", show(minimal_zero(obj, 2)))
plane, _ = minimal_isotropic_subspace(obj, 2, 2)
print("a smallest totally isotropic plane:", [show(v) for v in plane])
