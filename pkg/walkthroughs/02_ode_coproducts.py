"""
Grafting and insertion coproducts on ODE multi-indices
======================================================
"""
from multiindex import (
    OdeForest,
    delta_adjoint,
    delta_minus_adjoint,
    delta_minus_primal,
    delta_primal,
    enumerate_splittings,
    inner_product,
    render,
    star1,
    star2,
    z,
)

beta = z(2, 1, 1)

# every way to pull populated factors out of beta; the last one uses it whole
for s in enumerate_splittings(beta):
    print(f"{render(s.parts):>20}   remainder {render(s.remainder)}")

# the coproduct, computed two ways
delta = delta_primal(beta)
print()
print(render(delta))
print("adjoint formula agrees:", delta == delta_adjoint(beta))
print(render(delta, "latex"))

# each coefficient is the grafting pairing divided by the symmetry factors
forest, rest = OdeForest([z(1), z(1)]), z(1, 1)
graft = star2(forest, rest)
print()
print(render(forest), "grafted onto", rest, "=", render(graft))
print("pairing with beta / (S(F) S(rest)) =", inner_product(graft, beta) / (forest.symmetry() * rest.symmetry()))

# the extraction coproduct and its insertion dual
target = z(2, 0, 1)
print()
print(render(delta_minus_primal(target)))
print("adjoint formula agrees:", delta_minus_primal(target) == delta_minus_adjoint(target))
inserted = star1(OdeForest([z(1), z(1), z(1)]), target)
print("{ z0 ; z0 ; z0 } inserted into z0^2 z2 =", render(inserted))
