"""SIC-POVM representation of finite-dimensional quantum states."""

from .born_rule import (
    ConditionalMatrix,
    Povm,
    classical_ltp,
    conditional_matrix,
    evolve_probs,
    isu_check,
    reciprocity_posterior,
    unitary_transition,
    urgleichung,
)
from .sic_core import (
    Fiducial,
    SearchOptions,
    SicSet,
    builtin_sic,
    fiducial_orbit,
    find_sic,
    frobenius_objective,
    verify_sic,
    wh_displacement,
)
from .state_rep import (
    hs_inner_from_probs,
    probs_to_state,
    state_to_probs,
    structure_coeffs,
    validate_probs,
)

__version__ = "0.1.0"

__all__ = [
    "ConditionalMatrix",
    "Fiducial",
    "Povm",
    "SearchOptions",
    "SicSet",
    "builtin_sic",
    "classical_ltp",
    "conditional_matrix",
    "evolve_probs",
    "fiducial_orbit",
    "find_sic",
    "frobenius_objective",
    "hs_inner_from_probs",
    "isu_check",
    "probs_to_state",
    "reciprocity_posterior",
    "state_to_probs",
    "structure_coeffs",
    "unitary_transition",
    "urgleichung",
    "validate_probs",
    "verify_sic",
    "wh_displacement",
]
