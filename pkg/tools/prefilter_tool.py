"""
Prefilter Tool for the prefiltering simulator.
Outlyingness-based prefiltering procedures F mapping a sample to a subset.

Every keep-condition uses a strict "<" on the outlyingness score. The quantile
score Q(x, S) = |min{i : X_(i) >= x} - n/2| / n is implemented as written,
which makes upper-tail ranks slightly more outlying than their mirrored
lower-tail ranks; pass centered=True for the variant measured from (n+1)/2.
"""

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from tools.contamination_tool import Sample
from tools.huber_tool import mad, mean, median, std_dev
from utils.errors import ConfigError, EmptySampleError, UndefinedRankError

logger = logging.getLogger(__name__)


class PrefilterKind(str, Enum):
    QUANTILE = "quantile"
    ZSCORE = "zscore"
    SDO = "sdo"


@dataclass(frozen=True, order=True)
class PrefilterSpec:
    """A prefilter kind plus its scalar hyperparameter (p for quantile/SDO, l for z-score)."""

    kind: PrefilterKind
    param: float

    def __post_init__(self):
        try:
            kind = PrefilterKind(self.kind)
        except ValueError:
            raise ConfigError("invalid prefilter", [f"kind: unknown prefilter kind {self.kind!r}"]) from None
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "param", float(self.param))
        issues = validate_param(kind, self.param)
        if issues:
            raise ConfigError("invalid prefilter", issues)


def validate_param(kind: PrefilterKind, param: float) -> list:
    """Return the range violations for a hyperparameter (empty when valid)."""
    kind = PrefilterKind(kind)
    if kind is PrefilterKind.QUANTILE:
        if not 0.0 < param < 0.5:
            return [f"param: quantile p must lie in (0, 1/2), got {param}"]
    elif not 0.0 < param < float("inf"):
        return [f"param: {kind.value} threshold must lie in (0, inf), got {param}"]
    return []


def _subset(sample: Sample, keep: np.ndarray) -> Sample:
    if not keep.any():
        raise EmptySampleError(f"prefilter removed all {sample.n} points")
    return Sample(sample.values[keep])


def _ranks(values: np.ndarray) -> np.ndarray:
    # 1-based rank of the first order statistic >= each value
    return np.searchsorted(values, values, side="left") + 1


def quantile_outlyingness(x: float, sample: Sample, centered: bool = False) -> float:
    """
    Q(x, S) = |min{i : X_(i) >= x} - n/2| / n with 1-based ranks.

    Raises UndefinedRankError when x exceeds the sample maximum.
    """
    n = sample.n
    if n == 0 or x > sample.values[-1]:
        raise UndefinedRankError(f"no order statistic is >= {x}")
    if n == 1:
        # a single point is its own center
        return 0.0
    rank = int(np.searchsorted(sample.values, x, side="left")) + 1
    center = (n + 1) / 2 if centered else n / 2
    return abs(rank - center) / n


def apply_quantile(sample: Sample, p: float, centered: bool = False) -> Sample:
    """Keep {X in S : Q(X, S) < p}."""
    n = sample.n
    if n == 1:
        return sample
    center = (n + 1) / 2 if centered else n / 2
    scores = np.abs(_ranks(sample.values) - center) / n
    return _subset(sample, scores < p)


def apply_zscore(sample: Sample, l: float) -> Sample:
    """Keep {X : |X - mean| / SD < l}; with SD = 0 every score is 0 and all points stay."""
    sd = std_dev(sample)
    if sd == 0:
        return sample
    scores = np.abs(sample.values - mean(sample).value) / sd
    return _subset(sample, scores < l)


def apply_sdo(sample: Sample, p: float) -> Sample:
    """
    Keep {X : |X - Med| / MAD < p}.

    With MAD = 0 the score is 0 at the median and +inf elsewhere.
    """
    center = median(sample).value
    scale = mad(sample)
    deviations = np.abs(sample.values - center)
    if scale == 0:
        return _subset(sample, deviations == 0)
    return _subset(sample, deviations / scale < p)


def apply(spec: PrefilterSpec, sample: Sample) -> Sample:
    """Dispatch on the prefilter kind; the result is always a subset of the input."""
    if spec.kind is PrefilterKind.QUANTILE:
        return apply_quantile(sample, spec.param)
    if spec.kind is PrefilterKind.ZSCORE:
        return apply_zscore(sample, spec.param)
    return apply_sdo(sample, spec.param)


__all__ = [
    "PrefilterKind",
    "PrefilterSpec",
    "validate_param",
    "quantile_outlyingness",
    "apply_quantile",
    "apply_zscore",
    "apply_sdo",
    "apply",
]
