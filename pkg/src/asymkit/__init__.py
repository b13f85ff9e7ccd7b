"""asymkit: asymmetry tensors, covariant conversion rates, explicit channels.

The package computes how sensitive quantum states are to a compact group
action (quantum geometric tensor and two mixed-state extensions), solves the
PSD matrix pencils that give optimal i.i.d. pure-state conversion rates under
group-covariant operations, constructs the converting channels in Kraus form,
and verifies the surrounding inequalities by seeded small-scale simulation.
"""

from .core import (
    AsymmetryTensor,
    MetricSpec,
    generalized_variance,
    petz_norm,
    qgt,
    s_matrix,
    s_q_matrix,
    skew_information,
    u1_relative_entropy_asymmetry,
)
from .chankit import (
    ChannelBuildArtifacts,
    EstimateConvertReport,
    KrausChannel,
    MonteCarloTwirl,
    TwirlResult,
    apply_channel,
    build_conversion_channel,
    covariance_defect,
    estimate_and_convert,
    estimate_group_element,
    twirl,
)
from .errors import AsymkitError, PreconditionError, ResourceCapError, ValidationError
from .numkit import DEFAULT_TOL, ToleranceConfig, state_distance, tensor_cap
from .ratekit import (
    CostBoundReport,
    PencilResult,
    RateReport,
    ReversibilityReport,
    SymCheckOptions,
    SymVerdict,
    ThermoBounds,
    conversion_rate,
    cost_bound,
    dmax,
    distillable_bound,
    min_entropy_rate,
    reversibility_check,
    sup_ratio,
    sup_ratio_oracle,
    sup_ratio_sample_bound,
    sym_check,
    thermo_bounds,
    vanishing_distillable_check,
)
from .repkit import (
    GroupPoint,
    Representation,
    RepPair,
    U1Spec,
    congruence_matrix,
    iid_generators,
    lift_projective,
    projected_generators,
    u1_symmetry_divisor,
    unitary_at,
)
from .simkit import (
    FiniteNReport,
    LargestEvReport,
    MonotonicityReport,
    ScanConfig,
    ScanRow,
    ScanTable,
    SqSuiteReport,
    convergence_scan,
    finite_n_lemma2_probe,
    largest_ev_check,
    monotonicity_probe,
    s_q_property_suite,
    shifted_iid_state,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "AsymkitError",
    "ValidationError",
    "PreconditionError",
    "ResourceCapError",
    "ToleranceConfig",
    "DEFAULT_TOL",
    "tensor_cap",
    "state_distance",
    "Representation",
    "RepPair",
    "U1Spec",
    "GroupPoint",
    "unitary_at",
    "lift_projective",
    "congruence_matrix",
    "projected_generators",
    "iid_generators",
    "u1_symmetry_divisor",
    "AsymmetryTensor",
    "MetricSpec",
    "qgt",
    "generalized_variance",
    "petz_norm",
    "s_matrix",
    "s_q_matrix",
    "skew_information",
    "u1_relative_entropy_asymmetry",
    "PencilResult",
    "SymVerdict",
    "SymCheckOptions",
    "RateReport",
    "ReversibilityReport",
    "CostBoundReport",
    "ThermoBounds",
    "sup_ratio",
    "sup_ratio_oracle",
    "sup_ratio_sample_bound",
    "dmax",
    "sym_check",
    "conversion_rate",
    "reversibility_check",
    "distillable_bound",
    "vanishing_distillable_check",
    "cost_bound",
    "thermo_bounds",
    "min_entropy_rate",
    "KrausChannel",
    "ChannelBuildArtifacts",
    "TwirlResult",
    "MonteCarloTwirl",
    "EstimateConvertReport",
    "build_conversion_channel",
    "apply_channel",
    "twirl",
    "covariance_defect",
    "estimate_group_element",
    "estimate_and_convert",
    "ScanConfig",
    "ScanRow",
    "ScanTable",
    "MonotonicityReport",
    "LargestEvReport",
    "FiniteNReport",
    "SqSuiteReport",
    "shifted_iid_state",
    "convergence_scan",
    "monotonicity_probe",
    "largest_ev_check",
    "finite_n_lemma2_probe",
    "s_q_property_suite",
]
