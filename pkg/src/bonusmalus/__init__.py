"""Bonus-malus rating scales with claim types and varying per-claim deductibles."""

from .deductible import (
    DeductibleSchedule,
    allocate_greedy_top,
    allocate_manual,
    allocate_proportional_top,
    allocate_single_type,
    alpha_upper_bound,
    indifference_rhs,
    proportional_cap_x0,
    uniform_schedule,
    validate_schedule,
)
from .relativity import (
    DiracMixing,
    ExponentialUnitMixing,
    GammaUnitMixing,
    MixingDistribution,
    SteadyStateProfile,
    malus_entry_level,
    mix_integral,
    steady_state_profile,
)
from .scale import (
    ScaleRules,
    TransitionMatrix,
    build_transition_matrix,
    closed_form_stationary_4level,
    is_regular,
    stationary_distribution,
    thinned_pmf,
)
from .severity import (
    ClaimSeverity,
    ClaimTypePartition,
    ExponentialSeverity,
    band_mean,
    band_means,
    max_penalty_f,
    truncated_mean,
    type_probabilities,
)
from .simulate import SimulationConfig, SimulationReport, simulate_portfolio

__all__ = [
    "ClaimSeverity",
    "ClaimTypePartition",
    "DeductibleSchedule",
    "DiracMixing",
    "ExponentialSeverity",
    "ExponentialUnitMixing",
    "GammaUnitMixing",
    "MixingDistribution",
    "ScaleRules",
    "SimulationConfig",
    "SimulationReport",
    "SteadyStateProfile",
    "TransitionMatrix",
    "allocate_greedy_top",
    "allocate_manual",
    "allocate_proportional_top",
    "allocate_single_type",
    "alpha_upper_bound",
    "band_mean",
    "band_means",
    "build_transition_matrix",
    "closed_form_stationary_4level",
    "indifference_rhs",
    "is_regular",
    "malus_entry_level",
    "max_penalty_f",
    "mix_integral",
    "proportional_cap_x0",
    "simulate_portfolio",
    "stationary_distribution",
    "steady_state_profile",
    "thinned_pmf",
    "truncated_mean",
    "type_probabilities",
    "uniform_schedule",
    "validate_schedule",
]
