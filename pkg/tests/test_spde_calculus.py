from fractions import Fraction
from math import factorial

import pytest

from multiindex import (
    SPDE_ONE,
    EmptyInsertionError,
    LinComb,
    NotPopulatedError,
    SizeMismatchError,
    SpdeForest,
    SpdeMultiIndex,
    SpdePlainForest,
    Tensor2,
    delta_minus_primal,
    delta_minus_spde_adjoint,
    delta_minus_spde_primal,
    delta_primal,
    delta_spde_adjoint,
    delta_spde_primal,
    embed_ode,
    enumerate_spde_forests,
    grading,
    insert_spde,
    star1_spde,
    star2_spde,
    var,
    z,
)
from multiindex.ode_calculus import delta_adjoint, delta_minus_adjoint
from multiindex.spde_calculus import (
    embed_ode_delta,
    embed_ode_delta_minus,
    primitive_left,
    vectors_up_to,
)
from multiindex.oracles import oracle_delta_minus_spde, oracle_delta_spde

N, M = (1, 0), (0, 1)
bare = var("l", (0, 0))
b0 = var("l", (1, 0))
zn = var("l", (0, 0), [N])
zmm = var("l", (0, 0), [M, M])
b1mm = var("l", (0, 1), [M, M])
t_bare = var("0", (0, 0))
t_n = var("0", (0, 0), [N])
BETA = SpdeMultiIndex([(b0, 2), (zn, 1), (b1mm, 1)])


def mi(*variables):
    return SpdeMultiIndex.of(*variables)


@pytest.fixture(scope="module")
def delta_beta():
    return delta_spde_primal(BETA, 6)


# -- ★₂ ----------------------------------------------------------------------------


def test_star2_unit_forest():
    assert star2_spde(SpdeForest((0, 0)), mi(b0)) == LinComb({mi(b0): 1})


def test_star2_single_marker():
    f = SpdeForest((0, 0), [(mi(bare), N)])
    assert star2_spde(f, mi(bare)) == LinComb({mi(bare, zn): 1})


def test_star2_onto_unit_returns_forest():
    f = SpdeForest((0, 1), [(mi(b0), N)])
    assert star2_spde(f, SPDE_ONE) == LinComb({f: 1})
    assert star2_spde(primitive_left(mi(b0)), SPDE_ONE) == LinComb({mi(b0): 1})


# -- Δ ------------------------------------------------------------------------------


def test_delta_term_with_coefficient_two(delta_beta):
    f = SpdeForest((0, 1), [(mi(b0), (2, 0))])
    right = SpdeMultiIndex([(b0, 2), (zmm, 1)])
    assert delta_beta.coefficient(Tensor2(f, right)) == 2


def test_delta_inverse_factorial_family(delta_beta):
    checked = 0
    for ell in vectors_up_to(2, 4):
        if ell == N:
            continue
        f = SpdeForest((0, 1), [(mi(b0), (1 + ell[0], ell[1]))])
        if grading(f)[0] > 6:
            continue
        right = SpdeMultiIndex([(var("l", ell), 1), (b0, 1), (zmm, 1)])
        assert delta_beta.coefficient(Tensor2(f, right)) == Fraction(1, factorial(ell[0]) * factorial(ell[1]))
        checked += 1
    assert checked == 14


def test_delta_bare_variable_is_primitive():
    x = mi(bare)
    for g in range(4):
        expected = LinComb({Tensor2(SpdeForest((0, 0)), x): 1, Tensor2(primitive_left(x), SPDE_ONE): 1})
        assert delta_spde_primal(x, g) == expected == delta_spde_adjoint(x, g)


def test_delta_formula_equivalence_on_four_variable_input():
    assert delta_spde_primal(BETA, 3) == delta_spde_adjoint(BETA, 3)


@pytest.mark.parametrize("m", [mi(bare, zn), mi(b0, zn), SpdeMultiIndex([(b0, 2), (zmm, 1)])], ids=repr)
def test_delta_matches_oracle(m):
    assert delta_spde_primal(m, 2) == oracle_delta_spde(m, 2)


def test_delta_rejects_unpopulated():
    for fn in (delta_spde_primal, delta_spde_adjoint, delta_minus_spde_primal, delta_minus_spde_adjoint):
        with pytest.raises(NotPopulatedError):
            fn(mi(zn), 2)


def test_delta_truncation_keeps_prefix():
    low, high = delta_spde_primal(BETA, 2), delta_spde_primal(BETA, 3)
    assert high.filter(lambda t: grading(t.left)[0] <= 2 or t.left == primitive_left(BETA)) == low


def test_output_is_sorted_by_grading():
    grades = [grading(t.left)[0] for t in delta_spde_primal(BETA, 3)]
    assert grades == sorted(grades)


# -- forests ------------------------------------------------------------------------


def test_forests_of_bare_variable_at_grade_zero():
    assert enumerate_spde_forests(mi(bare), 0) == [SpdeForest((0, 0)), primitive_left(mi(bare))]


def test_forest_grade_zero_has_no_markers():
    for f in enumerate_spde_forests(BETA, 0):
        assert not any(f.k) and not any(any(n) for n in f.markers)


def test_forest_grade_monotone():
    for g in range(3):
        assert set(enumerate_spde_forests(BETA, g)) <= set(enumerate_spde_forests(BETA, g + 1))


# -- ▶ and ★₁ ----------------------------------------------------------------------


def test_insert_examples():
    assert insert_spde(mi(bare), mi(t_bare)) == LinComb({mi(bare): 1})
    assert insert_spde(mi(bare), mi(t_bare, t_n)) == LinComb({mi(bare, t_n): 1, mi(zn, t_bare): 1})


def test_insert_errors():
    with pytest.raises(EmptyInsertionError):
        insert_spde(SPDE_ONE, mi(t_bare))
    with pytest.raises(NotPopulatedError):
        insert_spde(mi(zn), mi(t_bare))


def test_star1_examples():
    assert star1_spde([mi(bare)], mi(t_bare)) == LinComb({mi(bare): 1})
    assert star1_spde([mi(bare), mi(bare)], mi(t_bare, t_n)) == LinComb({mi(bare, zn): 2})


def test_star1_errors():
    with pytest.raises(SizeMismatchError):
        star1_spde([mi(bare)], mi(t_bare, t_n))
    with pytest.raises(EmptyInsertionError):
        star1_spde([SPDE_ONE], mi(t_bare))


# -- Δ⁻ -----------------------------------------------------------------------------


def test_delta_minus_bare_variable():
    expected = LinComb({Tensor2(SpdePlainForest([mi(bare)]), mi(t_bare)): 1})
    for g in range(3):
        assert delta_minus_spde_primal(mi(bare), g) == expected == delta_minus_spde_adjoint(mi(bare), g)


def test_delta_minus_formula_equivalence_and_oracle():
    m = SpdeMultiIndex([(b0, 1), (zn, 1), (bare, 1), (zmm, 1)])
    got = delta_minus_spde_primal(m, 2)
    assert got == delta_minus_spde_adjoint(m, 2)
    assert got == oracle_delta_minus_spde(m, 2)


# -- ODE embedding -----------------------------------------------------------------


@pytest.mark.parametrize("beta", [z(1), z(1, 1), z(2, 0, 1), z(2, 1, 1), z(1, 3)], ids=repr)
def test_embedding_is_exact_with_zero_letter(beta):
    e = embed_ode(beta)
    assert delta_spde_primal(e, 0) == embed_ode_delta(delta_primal(beta)) == delta_spde_adjoint(e, 0)
    assert delta_minus_spde_primal(e, 0) == embed_ode_delta_minus(delta_minus_primal(beta))
    assert delta_minus_spde_adjoint(e, 0) == embed_ode_delta_minus(delta_minus_adjoint(beta))


@pytest.mark.parametrize("beta", [z(1, 1), z(2, 0, 1), z(2, 1, 1)], ids=repr)
def test_embedding_with_unit_letter_matches_on_image(beta):
    e = embed_ode(beta, (1,))
    image = embed_ode_delta(delta_adjoint(beta), (1,))
    got = delta_spde_primal(e, 4)
    assert got.filter(lambda t: t in image) == image
    image = embed_ode_delta_minus(delta_minus_primal(beta), (1,))
    got = delta_minus_spde_primal(e, 4)
    assert got.filter(lambda t: t in image) == image
