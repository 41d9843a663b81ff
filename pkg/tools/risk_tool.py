"""
Risk Tool for the prefiltering simulator.
Squared risk, learner-agnostic risk over a learner set and its decomposition
into the best learner's risk plus the heterogeneity gap.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Mapping

from tools.contamination_tool import Sample
from tools.huber_tool import Estimate, LearnerSet, huber_estimate
from tools.prefilter_tool import PrefilterSpec, apply
from utils.errors import DomainError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RiskReport:
    """
    Per-learner risks after one prefiltering, with
    agnostic = max, best = min and gap = agnostic - best.
    """

    per_learner: Dict[float, float]
    agnostic: float
    best: float
    gap: float

    @classmethod
    def from_risks(cls, per_learner: Mapping[float, float]) -> "RiskReport":
        if not per_learner:
            raise DomainError("a risk report needs at least one learner")
        risks = {float(delta): float(risk) for delta, risk in per_learner.items()}
        agnostic = max(risks.values())
        best = min(risks.values())
        gap = agnostic - best if math.isfinite(agnostic) else 0.0
        return cls(per_learner=risks, agnostic=agnostic, best=best, gap=gap)

    @classmethod
    def unbounded(cls, learners: LearnerSet) -> "RiskReport":
        """Report for a prefilter that retained nothing: every learner's risk is +inf."""
        return cls.from_risks({delta: math.inf for delta in learners})


def squared_risk(estimate, theta: float) -> float:
    """(estimate - theta)^2."""
    return (float(estimate) - theta) ** 2


def evaluate_estimates(estimates: Mapping[float, Estimate], theta: float) -> RiskReport:
    """Build a RiskReport from already computed per-learner estimates."""
    return RiskReport.from_risks({delta: squared_risk(est, theta) for delta, est in estimates.items()})


def evaluate(sample: Sample, spec: PrefilterSpec, learners: LearnerSet, theta: float) -> RiskReport:
    """Filter once, run every Huber learner on the filtered sample, and report the risks."""
    filtered = apply(spec, sample)
    estimates = {delta: huber_estimate(filtered, delta) for delta in learners}
    report = evaluate_estimates(estimates, theta)
    logger.debug(
        f"{spec.kind.value}({spec.param:.4g}) kept {filtered.n}/{sample.n}: "
        f"agnostic={report.agnostic:.3g} gap={report.gap:.3g}"
    )
    return report


def agnostic_risk_bound(epsilon: float, n: int, sigma: float, delta0: float, learners: LearnerSet) -> float:
    """
    Upper-bound shape for the quantile prefilter's agnostic risk:
    (eps^2 + log(1/delta0)/n) * sigma^2 + max delta^2. The constant is not included.
    """
    if not 0.0 < delta0 < 1.0:
        raise DomainError(f"delta0 must lie in (0, 1), got {delta0}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    return (epsilon**2 + math.log(1.0 / delta0) / n) * sigma**2 + learners.max_delta**2


__all__ = [
    "RiskReport",
    "squared_risk",
    "evaluate_estimates",
    "evaluate",
    "agnostic_risk_bound",
]
