"""Tools module for the learner-agnostic robust prefiltering simulator."""

from .contamination_tool import BernoulliTarget, ContaminationSpec, GaussianTarget, Sample, Seed, derive_seed, draw_contaminated
from .huber_tool import Estimate, LearnerSet, huber_estimate, huber_estimates, mad, mean, median, psi_sum
from .prefilter_tool import PrefilterKind, PrefilterSpec, apply, quantile_outlyingness
from .risk_tool import RiskReport, evaluate, squared_risk, agnostic_risk_bound
from .sweep_tool import (
    ExperimentConfig,
    SweepResult,
    PriceReport,
    run_cell,
    minmax_risk,
    heterogeneity_gap,
    aggregate,
    price_of_larp,
    run_experiment,
    run_heterogeneity_experiment,
)
from .game_tool import (
    GameConfig,
    LipschitzGameConfig,
    PaymentScheme,
    participation_threshold,
    lemma3_payments,
    verify_no_defection,
    mean_estimation_price,
    lipschitz_payments,
)
from .lowerbound_tool import BernoulliInstance, closed_form_estimates, population_huber_oracle, r_agn_curve

__all__ = [
    # Contamination model
    "GaussianTarget",
    "BernoulliTarget",
    "ContaminationSpec",
    "Seed",
    "Sample",
    "derive_seed",
    "draw_contaminated",

    # Estimators
    "LearnerSet",
    "Estimate",
    "mean",
    "median",
    "mad",
    "psi_sum",
    "huber_estimate",
    "huber_estimates",

    # Prefilters
    "PrefilterKind",
    "PrefilterSpec",
    "quantile_outlyingness",
    "apply",

    # Risk
    "RiskReport",
    "squared_risk",
    "evaluate",
    "agnostic_risk_bound",

    # Experiments
    "ExperimentConfig",
    "SweepResult",
    "PriceReport",
    "run_cell",
    "minmax_risk",
    "heterogeneity_gap",
    "aggregate",
    "price_of_larp",
    "run_experiment",
    "run_heterogeneity_experiment",

    # Cost-sharing game
    "GameConfig",
    "LipschitzGameConfig",
    "PaymentScheme",
    "participation_threshold",
    "lemma3_payments",
    "verify_no_defection",
    "mean_estimation_price",
    "lipschitz_payments",

    # Lower bound
    "BernoulliInstance",
    "closed_form_estimates",
    "population_huber_oracle",
    "r_agn_curve",
]
