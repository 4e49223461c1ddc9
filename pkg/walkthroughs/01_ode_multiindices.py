"""
ODE multi-indices: population, symmetry and the two derivations
===============================================================
"""
from multiindex import (
    ONE,
    adjoint_Dbar,
    derivation_D,
    enumerate_populated,
    inner_product,
    render,
    symmetry,
    z,
)

# z(2, 1, 1) is the monomial z0^2 z1 z2: exponent 2 on z0, 1 on z1 and z2
beta = z(2, 1, 1)
print(beta, "norm", beta.norm(), "population degree", beta.population_degree())

# only populated monomials (degree exactly 1) carry coproducts
for m in enumerate_populated(4):
    print(f"{render(m):>12}  S = {symmetry(m)}")

# D raises one index by one; the letter count stays, the degree drops by one
print("D  z0^2 z2     =", render(derivation_D(z(2, 0, 1))))
print("D  unit        =", render(derivation_D(ONE)))

# the adjoint lowers an index, with the coefficient k (beta(k-1) + 1)
image = adjoint_Dbar(z(1, 2, 1))
print("D* z0 z1^2 z2  =", render(image))

# adjointness against the symmetry-weighted pairing
for a in (z(2, 1, 1), z(1, 3)):
    print(f"<{a}, D* z0 z1^2 z2> = {inner_product(a, image)}", "=", inner_product(derivation_D(a), z(1, 2, 1)))
