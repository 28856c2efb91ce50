"""Oracle-efficient online learning with shared-randomness perturbations.

The engine perturbs each action's cumulative payoff through a low-dimensional
translation matrix and plays the perturbed leader; implementable matrices let
an offline optimization oracle absorb the perturbation as synthetic history.
Ships auction and bidding environments, stochastic adversaries, contextual
extensions, and an experiment harness.
"""

from .adversaries import (
    convergence_bound,
    generate,
    iid_sequence,
    scripted_sequence,
    spectral_gap_lower_bound,
    sticky_sequence,
    stochastic_benchmark,
)
from .contextual import (
    ContextualEnvironment,
    PolicyClass,
    make_policy_class,
    or_of_features_policies,
    q_extension,
    run_contextual_ftpl,
    run_transductive_ftpl,
    unit_and_zero_contexts,
    verify_separator,
)
from .engine import (
    Round,
    RunTrace,
    analyze_trace,
    run_ftpl_explicit,
    run_oracle_ftpl,
    run_oracle_ftpl_signed,
)
from .environments import *  # noqa: F401,F403
from .environments import __all__ as _env_all
from .errors import (
    ConfigError,
    GftplError,
    InvalidMatrixError,
    NotASeparatorError,
    ParameterError,
)
from .oracles import (
    OracleContract,
    capprox_guarantee_check,
    dataset_objective,
    exact_enum_oracle,
    integral_backed_oracle,
    integral_enum_oracle,
    integral_wrap,
)
from .perturbation import (
    POSITIVE_UNIFORM,
    SYMMETRIC_UNIFORM,
    PerturbationDistribution,
    eta_for_uniform,
    nu_for_transductive,
    sample_alpha,
    symmetric_uniform,
    uniform_for_horizon,
)
from .translation import (
    AdmissibilityReport,
    TranslationSpec,
    check_admissibility,
    pseudo_complexity,
    rows_matrix,
    translation_from_distinguishing_set,
    verify_implementability,
)

__all__ = [
    "PerturbationDistribution", "POSITIVE_UNIFORM", "SYMMETRIC_UNIFORM",
    "sample_alpha", "eta_for_uniform", "uniform_for_horizon", "symmetric_uniform",
    "nu_for_transductive",
    "TranslationSpec", "AdmissibilityReport", "check_admissibility",
    "verify_implementability", "pseudo_complexity", "rows_matrix",
    "translation_from_distinguishing_set",
    "OracleContract", "exact_enum_oracle", "integral_wrap", "integral_enum_oracle",
    "integral_backed_oracle", "capprox_guarantee_check", "dataset_objective",
    "Round", "RunTrace", "run_ftpl_explicit", "run_oracle_ftpl",
    "run_oracle_ftpl_signed", "analyze_trace",
    "PolicyClass", "make_policy_class", "verify_separator", "q_extension",
    "ContextualEnvironment", "run_contextual_ftpl", "run_transductive_ftpl",
    "or_of_features_policies", "unit_and_zero_contexts",
    "generate", "scripted_sequence", "iid_sequence", "sticky_sequence",
    "spectral_gap_lower_bound", "stochastic_benchmark", "convergence_bound",
    "GftplError", "ParameterError", "InvalidMatrixError", "NotASeparatorError",
    "ConfigError",
] + list(_env_all)
