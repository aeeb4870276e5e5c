"""Finite commutative hypergroups: harmonic analysis and a state-vector
simulation of the hidden sub-hypergroup algorithm."""

from .constructions import (
    PRESETS,
    class_hypergroup,
    cyclic_group,
    dihedral_group,
    direct_product,
    double_coset,
    group_hypergroup,
    group_table,
    order3_hermitian,
    order3_nonhermitian,
    presets,
    quaternion_group,
    symmetric_group,
    z2_theta,
)
from .core import (
    FiniteHypergroup,
    check_axioms,
    convolve,
    eval_translated,
    haar,
    is_commutative,
    is_hermitian,
    support_product,
    validate,
)
from .duality import (
    CharacterTable,
    character_table,
    double_dual_check,
    dual_hypergroup,
    dual_structure_constants,
    fourier_matrix,
    fourier_of_function,
    fourier_of_measure,
    inverse_fourier,
    is_strong,
    plancherel,
    tau,
    translation_operators,
)
from .errors import HypergroupError
from .hshp import (
    CosetOracle,
    HSHPRun,
    Policy,
    exact_distribution,
    make_coset_oracle,
    reconstruct,
    run_iteration,
    solve_hshp,
    verify_against_oracle,
)
from .subobjects import (
    Subhypergroup,
    annihilator,
    certify,
    cosets,
    enumerate_subhypergroups,
    lemma23_check,
    quotient,
    restrict,
)

__version__ = "0.1.0"
