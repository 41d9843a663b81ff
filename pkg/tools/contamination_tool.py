"""
Contamination Tool for the prefiltering simulator.
Domain types for targets and Huber contamination, and seeded sample generation.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np

from utils.errors import DomainError

logger = logging.getLogger(__name__)

_UINT64 = 2**64


@dataclass(frozen=True)
class GaussianTarget:
    """Target distribution N(theta, sigma^2)."""

    theta: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class BernoulliTarget:
    """Target distribution Ber(theta)."""

    theta: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.theta <= 1.0:
            raise DomainError(f"Bernoulli theta must lie in [0, 1], got {self.theta}")


@dataclass(frozen=True)
class ContaminationSpec:
    """
    Huber contamination (1 - epsilon) * D + epsilon * N(noise_mean, 1).

    The noise family is restricted to unit-variance Gaussians; by symmetry the
    experiments only visit noise_mean >= 0.
    """

    epsilon: float
    noise_mean: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 0.5:
            raise DomainError(f"epsilon must lie in [0, 1/2), got {self.epsilon}")
        if not (math.isfinite(self.noise_mean) and self.noise_mean >= 0):
            raise DomainError(f"noise mean must be finite and nonnegative, got {self.noise_mean}")


@dataclass(frozen=True)
class Seed:
    """Unsigned 64-bit base seed."""

    base: int

    def __post_init__(self):
        if not 0 <= int(self.base) < _UINT64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.base}")


@dataclass(frozen=True, eq=False)
class Sample:
    """
    Finite multiset of reals, stored sorted ascending as a read-only array.

    Use Sample.of(...) to build one from any iterable.
    """

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.sort(np.asarray(self.values, dtype=np.float64).ravel())
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, values: Iterable[float]) -> "Sample":
        return cls(np.fromiter((float(v) for v in values), dtype=np.float64))

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    def __repr__(self) -> str:
        return f"Sample(n={len(self)})"

    @property
    def n(self) -> int:
        return len(self)

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    @cached_property
    def prefix_sums(self) -> np.ndarray:
        """prefix_sums[k] = sum of the k smallest values."""
        sums = np.concatenate(([0.0], np.cumsum(self.values)))
        sums.setflags(write=False)
        return sums

    def shifted(self, offset: float) -> "Sample":
        return Sample(self.values + offset)

    def to_list(self) -> list:
        return self.values.tolist()


def derive_seed(base: Seed, replication: int, grid_index: int) -> Seed:
    """
    Derive the seed of one (replication, grid cell) stream.

    The pair is fed to numpy's SeedSequence as a spawn key, whose hashing
    mixes it with the base entropy; outputs do not depend on call order.
    """
    sequence = np.random.SeedSequence(entropy=int(base.base), spawn_key=(int(replication), int(grid_index)))
    state = sequence.generate_state(1, dtype=np.uint64)
    return Seed(int(state[0]))


def draw_contaminated(target: GaussianTarget, contamination: ContaminationSpec, n: int, seed: Seed) -> Sample:
    """
    Draw n points i.i.d. from (1 - eps) N(theta, sigma^2) + eps N(m, 1).

    Each point independently picks its component with a Bernoulli(eps) coin.
    The draw order (coins, clean, noise) is fixed so that identical inputs
    give bit-identical samples.
    """
    if n < 1:
        raise DomainError(f"sample size must be positive, got {n}")

    rng = np.random.default_rng(int(seed.base))
    contaminated = rng.random(n) < contamination.epsilon
    clean = rng.normal(target.theta, target.sigma, n)
    noise = rng.normal(contamination.noise_mean, 1.0, n)
    sample = Sample(np.where(contaminated, noise, clean))

    logger.debug(
        f"Drew n={n} eps={contamination.epsilon} m={contamination.noise_mean}: "
        f"{int(contaminated.sum())} contaminated points"
    )
    return sample


__all__ = [
    "GaussianTarget",
    "BernoulliTarget",
    "ContaminationSpec",
    "Seed",
    "Sample",
    "derive_seed",
    "draw_contaminated",
]
