"""
Huber Estimation Tool for the prefiltering simulator.
Order statistics and the exact Huber M-estimator used as downstream learners.
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from config.settings import settings
from tools.contamination_tool import Sample
from utils.errors import DomainError, EmptySampleError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LearnerSet:
    """The Huber parameters Delta of the downstream learners, sorted ascending."""

    deltas: Tuple[float, ...]

    def __post_init__(self):
        deltas = tuple(sorted(float(d) for d in self.deltas))
        if not deltas:
            raise DomainError("learner set must contain at least one delta")
        if any(d < 0 or math.isnan(d) for d in deltas):
            raise DomainError(f"Huber parameters must be nonnegative, got {deltas}")
        object.__setattr__(self, "deltas", deltas)

    @classmethod
    def of(cls, deltas: Iterable[float]) -> "LearnerSet":
        return cls(tuple(deltas))

    def __len__(self) -> int:
        return len(self.deltas)

    def __iter__(self):
        return iter(self.deltas)

    @property
    def max_delta(self) -> float:
        return self.deltas[-1]

    @property
    def min_delta(self) -> float:
        return self.deltas[0]


@dataclass(frozen=True)
class Estimate:
    """A scalar estimate theta-hat."""

    value: float

    def __float__(self) -> float:
        return float(self.value)


def _require_points(sample: Sample) -> None:
    if sample.is_empty:
        raise EmptySampleError("operation requires at least one point")


def mean(sample: Sample) -> Estimate:
    """Arithmetic mean."""
    _require_points(sample)
    return Estimate(float(sample.prefix_sums[-1] / sample.n))


def std_dev(sample: Sample) -> float:
    """Population standard deviation (divisor n)."""
    _require_points(sample)
    return float(np.std(sample.values))


def _sorted_median(values: np.ndarray) -> float:
    n = values.shape[0]
    k = n // 2
    if n % 2:
        return float(values[k])
    return float((values[k - 1] + values[k]) / 2.0)


def median(sample: Sample) -> Estimate:
    """Middle order statistic; mean of the two middle ones for even n."""
    _require_points(sample)
    return Estimate(_sorted_median(sample.values))


def mad(sample: Sample) -> float:
    """Median absolute deviation from the sample median (unscaled)."""
    _require_points(sample)
    center = _sorted_median(sample.values)
    return _sorted_median(np.sort(np.abs(sample.values - center)))


def huber_loss(x, delta: float):
    """Huber loss H_delta; quadratic inside [-delta, delta], linear outside."""
    x = np.abs(np.asarray(x, dtype=np.float64))
    return np.where(x <= delta, 0.5 * x * x, delta * (x - 0.5 * delta))


def huber_psi(x: float, delta: float) -> float:
    """Derivative of the Huber loss: x clipped to [-delta, delta]."""
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    return min(max(x, -delta), delta)


def psi_sum(sample: Sample, theta: float, delta: float) -> float:
    """
    g(theta) = sum_i psi(x_i - theta), evaluated in O(log n) on the sorted sample.

    Points at or below theta - delta contribute -delta, points at or above
    theta + delta contribute +delta, the rest contribute x_i - theta.
    """
    values = sample.values
    n = values.shape[0]
    low = int(np.searchsorted(values, theta - delta, side="right"))
    high = int(np.searchsorted(values, theta + delta, side="left"))
    if high < low:
        # delta == 0 and theta coincides with sample points
        high = low
    sums = sample.prefix_sums
    inner = float(sums[high] - sums[low]) - (high - low) * theta
    return delta * ((n - high) - low) + inner


def _bisect_boundary(sample: Sample, delta: float, lo: float, hi: float, upper: bool) -> float:
    """
    Locate a boundary of the root set of the nonincreasing g.

    upper=False finds sup{theta : g > 0}; upper=True finds inf{theta : g < 0}.
    """
    tolerance = settings.BISECTION_TOLERANCE
    for _ in range(settings.BISECTION_MAX_ITERATIONS):
        if hi - lo <= tolerance:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        g = psi_sum(sample, mid, delta)
        if (g < 0) if upper else (g <= 0):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def huber_estimate(sample: Sample, delta: float) -> Estimate:
    """
    Huber M-estimate argmin_theta sum_i H_delta(x_i - theta).

    The root set of g(theta) = sum_i psi(x_i - theta) is an interval [a, b]
    inside [min(S), max(S)]; both ends are located by bisection to the
    configured tolerance and the midpoint is returned. delta = 0 is the median.
    """
    _require_points(sample)
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta}")
    if delta == 0:
        return median(sample)

    lo, hi = float(sample.values[0]), float(sample.values[-1])
    if lo == hi:
        return Estimate(lo)

    left = _bisect_boundary(sample, delta, lo, hi, upper=False)
    right = _bisect_boundary(sample, delta, lo, hi, upper=True)
    return Estimate(0.5 * (left + right))


def huber_estimates(sample: Sample, learners: LearnerSet) -> dict:
    """Run every learner on the same sample; returns delta -> Estimate."""
    return {delta: huber_estimate(sample, delta) for delta in learners}


__all__ = [
    "LearnerSet",
    "Estimate",
    "mean",
    "std_dev",
    "median",
    "mad",
    "huber_loss",
    "huber_psi",
    "psi_sum",
    "huber_estimate",
    "huber_estimates",
]
