"""
Lower Bound Tool for the prefiltering simulator.
Population-level Bernoulli instance on which no prefilter serves every Huber
learner: the contaminated distribution is Ber(1/2) for both candidate targets
(1 - eps)/2 and (1 + eps)/2, and a prefilter can only move the mass p1 at 1.
"""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from tools.contamination_tool import BernoulliTarget
from tools.huber_tool import huber_loss
from utils.errors import DomainError

logger = logging.getLogger(__name__)

BERNOULLI_DELTAS = (0.0, 0.25, 2.0)
ORACLE_GRID_STEP = 1e-6
# objective values this close to the minimum count as minimizers
ORACLE_FLAT_TOLERANCE = 1e-13


@dataclass(frozen=True)
class BernoulliInstance:
    """Contamination ratio, the chosen target ("low" or "high") and the learners {0, 1/4, 2}."""

    epsilon: float
    theta_choice: str = "low"
    deltas: Tuple[float, ...] = BERNOULLI_DELTAS

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise DomainError(f"epsilon must lie in (0, 1/2), got {self.epsilon}")
        if self.theta_choice not in ("low", "high"):
            raise DomainError(f"theta_choice must be 'low' or 'high', got {self.theta_choice!r}")
        object.__setattr__(self, "deltas", tuple(float(d) for d in self.deltas))

    @property
    def theta(self) -> float:
        sign = -1.0 if self.theta_choice == "low" else 1.0
        return (1.0 + sign * self.epsilon) / 2.0

    @property
    def target(self) -> BernoulliTarget:
        return BernoulliTarget(self.theta)

    @property
    def contaminated_mass(self) -> float:
        """Mass at 1 of (1 - eps) Ber(theta) + eps Q, with the noise Q that makes it Ber(1/2)."""
        noise_mass = (0.5 - (1.0 - self.epsilon) * self.theta) / self.epsilon
        return (1.0 - self.epsilon) * self.theta + self.epsilon * noise_mass


def _check_p1(p1: float) -> None:
    if not 0.0 <= p1 <= 1.0:
        raise DomainError(f"p1 must lie in [0, 1], got {p1}")


def closed_form_estimates(p1: float) -> Tuple[float, float, float]:
    """
    Population Huber estimates (theta_0, theta_1/4, theta_2) on Ber(p1).

    The tie p1 = 1/2 follows the p1 <= 1/2 branch.
    """
    _check_p1(p1)
    if p1 > 0.5:
        return 1.0, 1.0 - (1.0 - p1) / (4.0 * p1), p1
    return 0.0, p1 / (4.0 * (1.0 - p1)), p1


def population_huber_oracle(p1: float, delta: float) -> float:
    """
    Minimize (1 - p1) H(0 - theta) + p1 H(1 - theta) over a grid on [0, 1].

    On a flat minimum the midpoint of the minimizing grid points is returned.
    delta = 0 uses the population median, 1/2 at the tie.
    """
    _check_p1(p1)
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        if p1 < 0.5:
            return 0.0
        return 1.0 if p1 > 0.5 else 0.5

    grid = np.linspace(0.0, 1.0, int(round(1.0 / ORACLE_GRID_STEP)) + 1)
    objective = (1.0 - p1) * huber_loss(grid, delta) + p1 * huber_loss(1.0 - grid, delta)
    minimizers = np.flatnonzero(objective <= objective.min() + ORACLE_FLAT_TOLERANCE)
    return float((grid[minimizers[0]] + grid[minimizers[-1]]) / 2.0)


class CurvePoint(NamedTuple):
    p1: float
    theta0: float
    theta_quarter: float
    theta2: float
    r_agn: float
    r_best: float


def default_p1_grid(grid_size: int = 1001) -> List[float]:
    if grid_size < 2:
        raise DomainError(f"grid size must be at least 2, got {grid_size}")
    return [float(p) for p in np.linspace(0.0, 1.0, grid_size)]


def lowerbound_curve(instance: BernoulliInstance, p1_grid: Sequence[float]) -> List[CurvePoint]:
    """Closed-form estimates with their worst-learner and best-learner squared errors."""
    points = []
    for p1 in p1_grid:
        estimates = closed_form_estimates(float(p1))
        risks = [(estimate - instance.theta) ** 2 for estimate in estimates]
        points.append(CurvePoint(float(p1), *estimates, max(risks), min(risks)))
    return points


def r_agn_curve(instance: BernoulliInstance, p1_grid: Sequence[float]) -> List[Tuple[float, float]]:
    """(p1, max over the three learners of the squared error) along the grid."""
    return [(point.p1, point.r_agn) for point in lowerbound_curve(instance, p1_grid)]


def best_learner_curve(instance: BernoulliInstance, p1_grid: Sequence[float]) -> List[Tuple[float, float]]:
    """(p1, min over the three learners of the squared error) along the grid."""
    return [(point.p1, point.r_best) for point in lowerbound_curve(instance, p1_grid)]


def separation(instance: BernoulliInstance, p1_grid: Sequence[float]) -> dict:
    """Best achievable agnostic risk against the best single-learner risk over the grid."""
    curve = lowerbound_curve(instance, p1_grid)
    agnostic = min(curve, key=lambda point: point.r_agn)
    single = min(curve, key=lambda point: point.r_best)
    logger.info(
        f"eps={instance.epsilon}: min R_agn={agnostic.r_agn:.6g} at p1={agnostic.p1:.4g}, "
        f"min best-learner risk={single.r_best:.6g} at p1={single.p1:.4g}"
    )
    return {
        "min_r_agn": agnostic.r_agn,
        "argmin_r_agn": agnostic.p1,
        "min_best_learner": single.r_best,
        "argmin_best_learner": single.p1,
    }


__all__ = [
    "BERNOULLI_DELTAS",
    "BernoulliInstance",
    "closed_form_estimates",
    "population_huber_oracle",
    "CurvePoint",
    "default_p1_grid",
    "lowerbound_curve",
    "r_agn_curve",
    "best_learner_curve",
    "separation",
]
