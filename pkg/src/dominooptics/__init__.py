"""Exact linear-optics simulation and no-go verification for the nine
locally indistinguishable domino product states."""

__version__ = "0.1.0"

from .domino import (
    LABELS,
    DominoSet,
    SymmetryOp,
    build_domino_set,
    domino_set_to_json_dict,
    gram_matrix,
    quadratic_form_poly,
    state_permutation,
    symmetry_R,
    symmetry_S,
    symmetry_T,
)
from .fock import (
    CreationPolynomial,
    ModeUnitary,
    Monomial,
    apply_unitary,
    coefficient_of_power,
    degree_in_mode,
    poly_from_terms,
    poly_multiply,
    vacuum_inner_product,
)
from .measure import (
    CascadeStrategy,
    CountLeaf,
    DetectionOutcome,
    DiscriminationReport,
    GuessLeaf,
    Stage,
    conditional_state,
    evaluate_strategy,
    optimal_guess_success,
    outcome_distribution,
)
from .nogo import (
    C0Certificate,
    ConditionResiduals,
    NsAnalysis,
    OptimizeConfig,
    aux_factorization_trials,
    certify_c0_infeasibility,
    compute_ns,
    condition_residuals,
    optimize_discrimination,
    reduce_by_symmetry,
    verify_aux_factorization,
)
from .optics import (
    AuxiliaryPreparation,
    Beamsplitter,
    OpticalElement,
    PhaseShifter,
    compose_elements,
    embed_with_aux,
    random_unitary,
    reck_decompose,
    vacuum_aux,
)

__all__ = [name for name in dir() if not name.startswith("_")]
