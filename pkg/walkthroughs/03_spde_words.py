"""
SPDE multi-indices: words, rewriting and derivations
====================================================
"""
from multiindex import (
    RawWord,
    SpdeMultiIndex,
    Word,
    D_word,
    adjoint_Dn,
    adjoint_partial_k,
    canonicalize,
    derivation_Dn,
    derivation_partial,
    grading,
    population_degree_spde,
    render,
    symmetry_spde,
    var,
)

# d = 1, so letters are vectors in N^2; b0 and b1 commute with each other,
# and a letter n trades places with b_i as  n b_i = b_i n + (n - e_i)
raw = RawWord(((1, 1), 0, (0, 1), 1))
print("canonical form of (1,1) b0 (0,1) b1:")
print("  ", render(canonicalize(raw, "l")))
print("   same from the right:", canonicalize(raw, "l", "rightmost") == canonicalize(raw, "l"))

n, m = (1, 0), (0, 1)
b0 = var("l", (1, 0))
beta = SpdeMultiIndex([(b0, 2), (var("l", (0, 0), [n]), 1), (var("l", (0, 1), [m, m]), 1)])
print()
print(render(beta))
print("population degree", population_degree_spde(beta), " symmetry", symmetry_spde(beta), " grading", grading(beta))

# b-letters are added as they are, letters go through the rewriting rule
print("d_1     :", render(derivation_partial(SpdeMultiIndex.of(b0), 1)))
print("D(1,1)  :", render(derivation_Dn(SpdeMultiIndex.of(b0), (1, 1))))
print("D^{b0 n}:", render(D_word(SpdeMultiIndex.of(var("l", (0, 0))), Word((1, 0), [n]))))

# the adjoints, with the coefficients of the worked SPDE example
print("d*^(0,1):", render(adjoint_partial_k(SpdeMultiIndex.of(b0, var("l", (0, 0), [n]), var("l", (0, 1), [m, m])), (0, 1))))
print("D*(2,0) :", render(adjoint_Dn(SpdeMultiIndex.of(b0, var("l", (0, 0), [n]), var("l", (0, 0), [m, m])), (2, 0))))
