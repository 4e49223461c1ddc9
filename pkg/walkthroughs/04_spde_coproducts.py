"""
Truncated SPDE coproducts and the ODE embedding
===============================================
"""
from fractions import Fraction
from math import factorial

from multiindex import (
    SpdeForest,
    SpdeMultiIndex,
    Tensor2,
    delta_minus_primal,
    delta_minus_spde_primal,
    delta_primal,
    delta_spde_adjoint,
    delta_spde_primal,
    embed_ode,
    grading,
    render,
    var,
    z,
)
from multiindex.spde_calculus import embed_ode_delta, embed_ode_delta_minus, vectors_up_to

n, m = (1, 0), (0, 1)
b0 = var("l", (1, 0))
zmm = var("l", (0, 0), [m, m])
beta = SpdeMultiIndex([(b0, 2), (var("l", (0, 0), [n]), 1), (var("l", (0, 1), [m, m]), 1)])

# the sums are infinite; keep left factors of first grading at most g
for g in range(4):
    delta = delta_spde_primal(beta, g)
    print(f"g = {g}: {len(delta):3d} terms, adjoint formula agrees: {delta == delta_spde_adjoint(beta, g)}")

delta = delta_spde_primal(beta, 6)
head = SpdeForest((0, 1), [(SpdeMultiIndex.of(b0), (2, 0))])
print()
print("coefficient of", render(Tensor2(head, SpdeMultiIndex([(b0, 2), (zmm, 1)]))), "=",
      delta.coefficient(Tensor2(head, SpdeMultiIndex([(b0, 2), (zmm, 1)]))))

# one term per shift l, weighted by 1/l!
for ell in vectors_up_to(2, 3):
    if ell == n:
        continue
    forest = SpdeForest((0, 1), [(SpdeMultiIndex.of(b0), (1 + ell[0], ell[1]))])
    right = SpdeMultiIndex([(var("l", ell), 1), (b0, 1), (zmm, 1)])
    got = delta.coefficient(Tensor2(forest, right))
    print(f"  l = {ell}  grading {grading(forest)[0]}  coefficient {got}", got == Fraction(1, factorial(ell[0]) * factorial(ell[1])))

# with d = 0 and only the zero letter, the SPDE stack is the ODE one
print()
for ode in (z(2, 1, 1), z(2, 0, 1)):
    e = embed_ode(ode)
    print(render(e))
    print("  coproduct matches:", delta_spde_primal(e, 0) == embed_ode_delta(delta_primal(ode)))
    print("  extraction matches:", delta_minus_spde_primal(e, 0) == embed_ode_delta_minus(delta_minus_primal(ode)))
