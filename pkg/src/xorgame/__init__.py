"""Quantum XOR games: biases, optimality relations, and strategy rigidity."""

from .games import (
    InvalidN,
    NotNormalized,
    TooLarge,
    XorGame,
    ZeroMatrix,
    chsh_game,
    chshn_pair_order,
    classical_bias,
    new_game,
    symmetrize,
)
from .linalg import (
    DimensionMismatch,
    NonHermitian,
    SchmidtDecomposition,
    frobenius,
    hermitian_eig,
    kron,
    matrix_to_vec,
    schmidt,
    sign_normalize,
    vec_to_matrix,
)
from .relations import (
    DualInfeasible,
    RelationSystem,
    certify_epsilon,
    check_identity,
    chshn_dual_y,
    chshn_relations_form1,
    chshn_relations_form2,
    extract_relations,
    invariant_deviations,
    residual,
)
from .sdp import (
    MaxIterations,
    NonSymmetric,
    SdpSolution,
    quantum_bias,
    solve,
    verify_dual_feasible,
)
from .strategies import (
    BadDiagonal,
    InvalidK,
    NonRealBias,
    NotPsd,
    Observable,
    Strategy,
    bias,
    canonical_chshn,
    embed_with_junk,
    maximally_entangled,
    perturb,
    sigma_observables,
    simulate,
    tsirelson_strategy,
)
from .structure import (
    BitString,
    IndexOutOfRange,
    IntertwinerReport,
    StructureReport,
    ab_switch_check,
    anticommutation_residual,
    build_intertwiner,
    canonical_vector_family,
    chain_product,
    insertion_sign_left,
    insertion_sign_right,
    intertwiner_report,
    normalization_lemma_check,
    verify_optimal_form,
)

__version__ = "0.1.0"

__all__ = [
    "BadDiagonal",
    "BitString",
    "DimensionMismatch",
    "DualInfeasible",
    "IndexOutOfRange",
    "IntertwinerReport",
    "InvalidK",
    "InvalidN",
    "MaxIterations",
    "NonHermitian",
    "NonRealBias",
    "NonSymmetric",
    "NotNormalized",
    "NotPsd",
    "Observable",
    "RelationSystem",
    "SchmidtDecomposition",
    "SdpSolution",
    "Strategy",
    "StructureReport",
    "TooLarge",
    "XorGame",
    "ZeroMatrix",
    "ab_switch_check",
    "anticommutation_residual",
    "bias",
    "build_intertwiner",
    "canonical_chshn",
    "canonical_vector_family",
    "certify_epsilon",
    "chain_product",
    "check_identity",
    "chsh_game",
    "chshn_dual_y",
    "chshn_pair_order",
    "chshn_relations_form1",
    "chshn_relations_form2",
    "classical_bias",
    "embed_with_junk",
    "extract_relations",
    "frobenius",
    "hermitian_eig",
    "insertion_sign_left",
    "insertion_sign_right",
    "intertwiner_report",
    "invariant_deviations",
    "kron",
    "matrix_to_vec",
    "maximally_entangled",
    "new_game",
    "normalization_lemma_check",
    "perturb",
    "quantum_bias",
    "residual",
    "schmidt",
    "sigma_observables",
    "sign_normalize",
    "simulate",
    "solve",
    "symmetrize",
    "tsirelson_strategy",
    "vec_to_matrix",
    "verify_dual_feasible",
    "verify_optimal_form",
]
