"""Exact multi-index calculus: symmetry factors, derivations and their adjoints,
the grafting and insertion products, and the coproducts dual to them, for
ODE and SPDE multi-indices."""
from .algebra import Forest, LinComb, Tensor2, add, coefficient_of, scale, tensor
from .errors import (
    EmptyInsertionError,
    KindMismatchError,
    MultiIndexError,
    NotPopulatedError,
    ParseError,
    SizeMismatchError,
    UndefinedInputError,
    UnknownLawError,
)
from .ode import (
    ONE,
    OdeForest,
    OdeMultiIndex,
    adjoint_Dbar,
    adjoint_Dbar_power,
    derivation_D,
    derivation_D_power,
    forest_symmetry,
    graft,
    inner_product,
    is_populated,
    norm,
    partial,
    population_degree,
    s_ext,
    symmetry,
    z,
)
from .ode_calculus import (
    InsertionConfig,
    Splitting,
    delta_adjoint,
    delta_minus_adjoint,
    delta_minus_primal,
    delta_primal,
    enumerate_insertion_configs,
    enumerate_populated,
    enumerate_predecessors,
    enumerate_splittings,
    insert,
    star1,
    star2,
)
from .spde import (
    SPDE_ONE,
    TRUNK_LABEL,
    RawWord,
    SpdeForest,
    SpdeMultiIndex,
    SpdePlainForest,
    SpdeVariable,
    Word,
    D_word,
    adjoint_D_word,
    adjoint_Dn,
    adjoint_partial,
    adjoint_partial_k,
    canonicalize,
    derivation_Dn,
    derivation_partial,
    derivation_partial_k,
    forest_symmetry_spde,
    grading,
    inner_product_spde,
    is_populated_spde,
    population_degree_spde,
    s_ext_spde,
    symmetry_spde,
    var,
)
from .spde_calculus import (
    GradeBound,
    delta_minus_spde_adjoint,
    delta_minus_spde_primal,
    delta_spde_adjoint,
    delta_spde_primal,
    embed_ode,
    enumerate_spde_forests,
    insert_spde,
    star1_spde,
    star2_spde,
)
from .textio import decode_json, encode_json, parse, render

__version__ = "0.1.0"
