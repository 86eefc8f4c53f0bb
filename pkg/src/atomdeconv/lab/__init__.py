"""Simulation and lower-bound experiments built on the estimators."""

from .lowerbound import (
    AlternativePair,
    ChiSquareResult,
    DeltaMode,
    DivergenceRow,
    FlatTop,
    PerturbationBase,
    chi_sq_divergence,
    divergence_slope,
    divergence_table,
    flat_top_H,
    separation,
)
from .simulate import (
    EstimatorVariant,
    ModelSpec,
    RateFit,
    RiskReport,
    RiskRow,
    TargetDensity,
    builtin_targets,
    fit_rate,
    get_target,
    mc_risk_f,
    mc_risk_p,
    sample_model,
)

__all__ = [
    "AlternativePair",
    "ChiSquareResult",
    "DeltaMode",
    "DivergenceRow",
    "FlatTop",
    "PerturbationBase",
    "chi_sq_divergence",
    "divergence_slope",
    "divergence_table",
    "flat_top_H",
    "separation",
    "EstimatorVariant",
    "ModelSpec",
    "RateFit",
    "RiskReport",
    "RiskRow",
    "TargetDensity",
    "builtin_targets",
    "fit_rate",
    "get_target",
    "mc_risk_f",
    "mc_risk_p",
    "sample_model",
]
