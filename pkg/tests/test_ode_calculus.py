from fractions import Fraction

import pytest

from multiindex import (
    ONE,
    EmptyInsertionError,
    LinComb,
    NotPopulatedError,
    OdeForest,
    SizeMismatchError,
    Tensor2,
    adjoint_Dbar_power,
    delta_adjoint,
    delta_minus_adjoint,
    delta_minus_primal,
    delta_primal,
    enumerate_insertion_configs,
    enumerate_populated,
    enumerate_predecessors,
    enumerate_splittings,
    inner_product,
    insert,
    is_populated,
    s_ext,
    star1,
    star2,
    z,
)
from multiindex.ode import OdeMultiIndex
from multiindex.ode_calculus import extraction_coefficient_adjoint, extraction_coefficient_primal, InsertionConfig
from multiindex.oracles import ode_multiindices, oracle_delta, oracle_delta_minus


def F(*members):
    return OdeForest(members)


def T(f, r):
    return Tensor2(f, r)


GOLDEN_DELTA = LinComb(
    {
        T(F(), z(2, 1, 1)): 1,
        T(F(z(2, 1, 1)), ONE): 1,
        T(F(z(1)), z(2, 0, 1)): 2,
        T(F(z(1)), z(1, 2)): 4,
        T(F(z(1, 1)), z(1, 1)): 2,
        T(F(z(2, 0, 1)), z(1)): 1,
        T(F(z(1), z(1)), z(1, 1)): 3,
        T(F(z(1), z(1, 1)), z(1)): 2,
    }
)

GOLDEN_DELTA_MINUS = LinComb(
    {
        T(F(z(2, 0, 1)), z(1)): 1,
        T(F(z(1), z(1, 1)), z(1, 1)): 2,
        T(F(z(1), z(1), z(1)), z(2, 0, 1)): 1,
    }
)


# -- ★₂ ----------------------------------------------------------------------------


def test_star2_examples():
    assert star2(F(z(1)), z(1, 1)) == LinComb({z(1, 2): 1, z(2, 0, 1): 1})
    assert star2(F(), z(1)) == LinComb({z(1): 1})
    image = star2(F(z(1), z(1)), z(1, 1))
    assert image == LinComb({z(2, 1, 1): 3, z(3, 0, 0, 1): 1})
    assert inner_product(image, z(2, 1, 1)) / z(2, 1, 1).symmetry() == 3


def test_star2_onto_unit_returns_forest():
    assert star2(F(z(1, 1)), ONE) == LinComb({z(1, 1): 1})
    assert star2(F(z(1), z(1)), ONE) == LinComb({F(z(1), z(1)): 1})


# -- Δ -----------------------------------------------------------------------------


def test_delta_golden():
    assert delta_primal(z(2, 1, 1)) == GOLDEN_DELTA
    assert delta_adjoint(z(2, 1, 1)) == GOLDEN_DELTA


def test_delta_single_letter():
    expected = LinComb({T(F(), z(1)): 1, T(F(z(1)), ONE): 1})
    assert delta_primal(z(1)) == expected == delta_adjoint(z(1))


def test_delta_rejects_unpopulated():
    # z0^2 z1 has degree 2, so the coproduct is not defined on it
    for fn in (delta_primal, delta_adjoint, delta_minus_primal, delta_minus_adjoint):
        with pytest.raises(NotPopulatedError):
            fn(z(2, 1))


def test_delta_norm_three_matches_oracle():
    assert delta_primal(z(1, 2)) == oracle_delta(z(1, 2))


def test_adjoint_formula_rows():
    assert adjoint_Dbar_power(z(1, 1, 1), 1) == LinComb({z(2, 0, 1): 2, z(1, 2): 4})
    row4 = adjoint_Dbar_power(z(0, 1, 1), 2)
    assert row4 == LinComb({z(1, 1): 6})
    assert row4.coefficient(z(1, 1)) / s_ext(F(z(1), z(1))) == 3


def test_delta_counting_identity():
    for m in enumerate_populated(5):
        for (f, r), _ in delta_primal(m).items():
            assert all(is_populated(b) for b in f)
            assert f.norm() + r.norm() == m.norm()
            assert not r or is_populated(r)


# -- enumerators ---------------------------------------------------------------------


def test_splittings_of_z0sq_z1_z2():
    splits = enumerate_splittings(z(2, 1, 1))
    expected = {F(z(1)), F(z(1, 1)), F(z(2, 0, 1)), F(z(1), z(1)), F(z(1), z(1, 1))}
    assert {s.parts for s in splits if s.remainder} == expected
    assert len(splits) == len({(s.parts, s.remainder) for s in splits})
    for s in splits:
        assert s.parts.product() * s.remainder == z(2, 1, 1)


def test_splittings_small():
    assert [(s.parts, s.remainder) for s in enumerate_splittings(z(1))] == [(F(z(1)), ONE)]
    assert enumerate_splittings(z(0, 1)) == []


def test_predecessors():
    assert enumerate_predecessors(z(1, 1, 1), 1) == sorted([z(2, 0, 1), z(1, 2)])
    assert enumerate_predecessors(z(0, 1), 1) == [z(1)]
    assert enumerate_predecessors(z(1), 1) == []


def _brute_force_populated(max_norm):
    return sorted((m for m in ode_multiindices(max_norm) if is_populated(m)), key=lambda m: (m.norm(), m.items))


def test_enumerate_populated():
    assert enumerate_populated(1) == [z(1)]
    assert enumerate_populated(2) == [z(1), z(1, 1)]
    assert set(enumerate_populated(3)) == {z(1), z(1, 1), z(1, 2), z(2, 0, 1)}
    for n in range(1, 7):
        assert enumerate_populated(n) == _brute_force_populated(n)


# -- ▶ and ★₁ ------------------------------------------------------------------------


def test_insert_examples():
    assert insert(z(1), z(1, 1)) == LinComb({z(1, 1): 2})
    assert insert(z(1), z(1)) == LinComb({z(1): 1})
    assert insert(z(1, 1), z(1)) == LinComb({z(1, 1): 1})


def test_insert_errors():
    with pytest.raises(EmptyInsertionError):
        insert(ONE, z(1))
    with pytest.raises(NotPopulatedError):
        insert(z(0, 1), z(1))


def test_insert_preserves_population():
    pool = enumerate_populated(4)
    for a in pool:
        for b in pool:
            assert all(is_populated(k) for k in insert(a, b))


def test_star1_examples():
    image = star1(F(z(1), z(1, 1)), z(1, 1))
    assert image == LinComb({z(1, 2): 2, z(2, 0, 1): 1})
    assert inner_product(image, z(2, 0, 1)) == 2
    assert star1(F(z(1)), z(1)) == LinComb({z(1): 1})


def test_star1_three_members():
    image = star1(F(z(1), z(1), z(1)), z(2, 0, 1))
    # three orderings of the letters 0, 0, 2, each weighted by the derivative 2
    assert image == LinComb({z(2, 0, 1): 6})
    assert inner_product(image, z(2, 0, 1)) == 12
    assert inner_product(image, z(2, 0, 1)) == F(z(1), z(1), z(1)).symmetry() * z(2, 0, 1).symmetry() * 1


def test_star1_errors():
    with pytest.raises(SizeMismatchError):
        star1(F(z(1)), z(1, 1))
    with pytest.raises(EmptyInsertionError):
        star1(F(ONE), z(1))


# -- Δ⁻ ------------------------------------------------------------------------------


def test_delta_minus_golden():
    assert delta_minus_primal(z(2, 0, 1)) == GOLDEN_DELTA_MINUS
    assert delta_minus_adjoint(z(2, 0, 1)) == GOLDEN_DELTA_MINUS


def test_delta_minus_single_letter():
    assert delta_minus_primal(z(1)) == LinComb({T(F(z(1)), z(1)): 1}) == delta_minus_adjoint(z(1))


def test_extraction_coefficients():
    config = InsertionConfig(((z(1), 0), (z(1), 0), (z(1), 2)))
    for fn in (extraction_coefficient_primal, extraction_coefficient_adjoint):
        assert fn(config, z(2, 0, 1)) == Fraction(1, 3)
    assert config.multiplicity() == 3
    assert extraction_coefficient_primal(InsertionConfig(((z(1), 0), (z(1, 1), 1))), z(2, 0, 1)) == 2


def test_adjoint_extraction_pairing():
    assert inner_product(z(1), adjoint_Dbar_power(z(0, 0, 1), 2)) / z(1).symmetry() == 2


def test_insertion_configs_have_populated_trunks():
    for m in enumerate_populated(5):
        for c in enumerate_insertion_configs(m):
            assert is_populated(c.trunk)
            assert all(is_populated(b) for b in c.forest)


@pytest.mark.parametrize("m", enumerate_populated(5), ids=repr)
def test_formula_equivalence(m):
    assert delta_primal(m) == delta_adjoint(m)
    assert delta_minus_primal(m) == delta_minus_adjoint(m)


@pytest.mark.parametrize("m", enumerate_populated(5), ids=repr)
def test_oracles_agree(m):
    assert delta_primal(m) == oracle_delta(m)
    if m.norm() <= 4:
        assert delta_minus_primal(m) == oracle_delta_minus(m)


def test_formula_equivalence_beyond_the_required_range():
    for m in enumerate_populated(7):
        assert delta_primal(m) == delta_adjoint(m)
        assert delta_minus_primal(m) == delta_minus_adjoint(m)
