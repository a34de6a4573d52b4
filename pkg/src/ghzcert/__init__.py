"""GHZ fidelity bounds and entanglement certification from stabilizer
correlation measurements."""

from .analysis import (
    AnalysisRequest,
    parse_input,
    parse_report,
    render_report,
    request_mean,
    request_observable,
    run_analysis,
    simulate_request,
)
from .bounds import (
    FidelityInterval,
    MinVarianceResult,
    WitnessVerdict,
    fidelity_bounds,
    lp_fidelity_range,
    min_variance_distribution,
    min_variance_fidelity,
    propagate_uncertainty,
    witness_verdict,
)
from .errors import (
    DegenerateSpectrumError,
    GhzCertError,
    InfeasibleMeanError,
    InputError,
    NegatedElementError,
    NotInClassError,
    NotInGroupError,
    OracleError,
)
from .observable import (
    ClassReport,
    Observable,
    Spectrum,
    build_observable,
    check_class_membership,
    key_eigenvalues,
    spectrum,
)
from .oracle import (
    SuiteResult,
    WernerExpectations,
    dense_matrix,
    dense_spectrum,
    ghz_basis,
    ghz_vector,
    lemma_check,
    lemma_margins,
    projector_expansion_check,
    proposition1_check,
    random_density_matrix,
    verify_all,
    werner_expectations,
)
from .pauli import PauliString, commutes, identity, multiply, pauli_from_label
from .stabilizer import (
    GroupElement,
    canonical_generators,
    element_from_index,
    enumerate_group,
    group_product,
    membership,
    rank_gf2,
)

__version__ = "1.0.0"

__all__ = [
    "AnalysisRequest",
    "ClassReport",
    "DegenerateSpectrumError",
    "FidelityInterval",
    "GhzCertError",
    "GroupElement",
    "InfeasibleMeanError",
    "InputError",
    "MinVarianceResult",
    "NegatedElementError",
    "NotInClassError",
    "NotInGroupError",
    "Observable",
    "OracleError",
    "PauliString",
    "Spectrum",
    "SuiteResult",
    "WernerExpectations",
    "WitnessVerdict",
    "build_observable",
    "canonical_generators",
    "check_class_membership",
    "commutes",
    "dense_matrix",
    "dense_spectrum",
    "element_from_index",
    "enumerate_group",
    "fidelity_bounds",
    "ghz_basis",
    "ghz_vector",
    "group_product",
    "identity",
    "key_eigenvalues",
    "lemma_check",
    "lemma_margins",
    "lp_fidelity_range",
    "membership",
    "min_variance_distribution",
    "min_variance_fidelity",
    "multiply",
    "parse_input",
    "parse_report",
    "pauli_from_label",
    "projector_expansion_check",
    "propagate_uncertainty",
    "proposition1_check",
    "random_density_matrix",
    "rank_gf2",
    "render_report",
    "request_mean",
    "request_observable",
    "run_analysis",
    "simulate_request",
    "spectrum",
    "verify_all",
    "werner_expectations",
    "witness_verdict",
]
