"""Output-entropy toolkit for finite-dimensional quantum channels and operations."""

from .capacity import (
    ConstraintSet,
    Ensemble,
    HolevoSolution,
    eof,
    eof_local_operation_probe,
    holevo_capacity,
    holevo_quantity,
    optimal_ensemble_report,
)
from .channels import (
    KrausOperation,
    StinespringDilation,
    apply,
    complement,
    compose,
    dephasing_channel,
    depolarizing_channel,
    dual,
    environment_output,
    group_average_channel,
    identity_channel,
    random_phase_channel,
    stinespring,
    tensor_op,
)
from .continuity import (
    AnalyticKrausFamily,
    NormLaw,
    RankLaw,
    SingularProfile,
    Verdict,
    approximator,
    brute_force_hk,
    classical_max_distribution,
    complement_gap_bound_check,
    delta_k_bound,
    divergence_center,
    lambda_star,
    series_classifier,
    spectral_truncate,
    sup_output_entropy_vrv,
    truncation_sweep,
)
from .entropy import (
    INFINITE_ENTROPY,
    binary_h2,
    classical_entropy,
    coherent_information,
    eta,
    is_infinite,
    output_entropy,
    quantum_entropy,
    relative_entropy,
)
from .operators import (
    HermitianOperator,
    PositiveOperator,
    Spectrum,
    partial_trace,
    spectrum,
    tensor,
    validate_positive,
)

__version__ = "0.1.0"
