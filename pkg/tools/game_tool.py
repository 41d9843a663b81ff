"""
Game Tool for the prefiltering simulator.
Cost-sharing game between learners that share one prefiltering of a dataset
of size n at total cost C * n^alpha.

A learner stays with the shared (agnostic) prefilter when its payment does not
exceed the cost of prefiltering alone minus the utility it loses by sharing:
p_l <= C * n^alpha - u_l. Utility reductions u_l are in absolute utility units.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

from tools.huber_tool import LearnerSet
from utils.errors import DomainError, InfeasibleGameError

logger = logging.getLogger(__name__)

# Relative slack on the no-defection comparison, absorbs rounding in the normalization
DEFECTION_TOLERANCE = 1e-9


def _validate_cost(cost_scale: float, cost_exponent: float, n: int) -> List[str]:
    issues = []
    if not (math.isfinite(cost_scale) and cost_scale > 0):
        issues.append(f"cost_scale: C must be positive, got {cost_scale}")
    if not (math.isfinite(cost_exponent) and cost_exponent >= 1):
        issues.append(f"cost_exponent: alpha must be at least 1, got {cost_exponent}")
    if not (isinstance(n, int) and not isinstance(n, bool) and n >= 1):
        issues.append(f"n: expected a positive integer, got {n!r}")
    if not issues and not math.isfinite(_total_cost(cost_scale, cost_exponent, n)):
        issues.append(f"n: C * n^alpha overflows for n={n}, alpha={cost_exponent}")
    return issues


def _total_cost(cost_scale: float, cost_exponent: float, n: int) -> float:
    """C * n^alpha; +inf when it is not representable."""
    try:
        return cost_scale * float(n) ** cost_exponent
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class GameConfig:
    """C, alpha, dataset size and the per-learner utility reductions."""

    cost_scale: float
    cost_exponent: float
    n: int
    u_reductions: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "u_reductions", tuple(float(u) for u in self.u_reductions))
        issues = _validate_cost(self.cost_scale, self.cost_exponent, self.n)
        if not self.u_reductions:
            issues.append("u_reductions: at least one learner is required")
        issues.extend(
            f"u_reductions[{i}]: expected a finite nonnegative value, got {u}"
            for i, u in enumerate(self.u_reductions)
            if not (math.isfinite(u) and u >= 0)
        )
        if issues:
            raise DomainError("invalid game: " + "; ".join(issues))

    @property
    def num_learners(self) -> int:
        return len(self.u_reductions)

    @property
    def total_cost(self) -> float:
        return _total_cost(self.cost_scale, self.cost_exponent, self.n)

    @property
    def price(self) -> float:
        """Average utility reduction across learners."""
        return math.fsum(self.u_reductions) / self.num_learners


@dataclass(frozen=True)
class PaymentScheme:
    payments: Tuple[float, ...]
    total: float

    def __post_init__(self):
        object.__setattr__(self, "payments", tuple(float(p) for p in self.payments))
        if any(p < 0 for p in self.payments):
            raise DomainError(f"payments must be nonnegative, got {self.payments}")


@dataclass(frozen=True)
class LipschitzGameConfig:
    """
    Game whose downstream utility is L-Lipschitz in the risk, with risks
    replaced by their upper-bound surrogates (eps^2 + log(1/delta0)/n) * sigma^2 + delta^2.
    """

    lipschitz: float
    deltas: LearnerSet
    cost_scale: float
    cost_exponent: float
    n: int
    epsilon: float = 0.0
    sigma: float = 1.0
    delta0: float = 0.05

    def __post_init__(self):
        if not isinstance(self.deltas, LearnerSet):
            object.__setattr__(self, "deltas", LearnerSet.of(self.deltas))
        issues = _validate_cost(self.cost_scale, self.cost_exponent, self.n)
        if not (math.isfinite(self.lipschitz) and self.lipschitz > 0):
            issues.append(f"lipschitz: L must be positive, got {self.lipschitz}")
        if not 0 <= self.epsilon < 0.5:
            issues.append(f"epsilon: expected a value in [0, 1/2), got {self.epsilon}")
        if not self.sigma > 0:
            issues.append(f"sigma: expected a positive value, got {self.sigma}")
        if not 0 < self.delta0 < 1:
            issues.append(f"delta0: expected a value in (0, 1), got {self.delta0}")
        if issues:
            raise DomainError("invalid game: " + "; ".join(issues))

    @property
    def num_learners(self) -> int:
        return len(self.deltas)

    @property
    def total_cost(self) -> float:
        return _total_cost(self.cost_scale, self.cost_exponent, self.n)

    def surrogate_risk(self, delta: float) -> float:
        return (self.epsilon**2 + math.log(1.0 / self.delta0) / self.n) * self.sigma**2 + delta**2

    def reductions(self) -> Tuple[float, ...]:
        """Absolute utility lost by each learner: L * (delta_N^2 - delta_i^2)."""
        top = self.deltas.max_delta
        return tuple(self.lipschitz * (top**2 - d**2) for d in self.deltas)


def participation_threshold(cost_scale: float, cost_exponent: float, num_learners: int, price: float) -> float:
    """
    Dataset size above which shared prefiltering is weakly preferred by everyone:
    (|L| / (C (|L| - 1)) * P)^(1/alpha). Compare n strictly greater.
    """
    if num_learners < 2:
        raise DomainError(f"participation threshold needs at least 2 learners, got {num_learners}")
    if price < 0:
        raise DomainError(f"price must be nonnegative, got {price}")
    base = num_learners / (cost_scale * (num_learners - 1)) * price
    return base ** (1.0 / cost_exponent)


def _normalize(weights: Sequence[float], total: float) -> PaymentScheme:
    weight_sum = math.fsum(weights)
    return PaymentScheme(payments=tuple(total * w / weight_sum for w in weights), total=total)


def lemma3_payments(config: GameConfig) -> PaymentScheme:
    """
    Budget-balanced payments p_l proportional to C n^alpha - u_l.

    Raises:
        InfeasibleGameError: n is not above the participation threshold, or a weight is nonpositive
    """
    total = config.total_cost
    if config.num_learners >= 2:
        threshold = participation_threshold(
            config.cost_scale, config.cost_exponent, config.num_learners, config.price
        )
        if not config.n > threshold:
            raise InfeasibleGameError(f"n={config.n} does not exceed the participation threshold {threshold:.6g}")

    weights = [total - u for u in config.u_reductions]
    nonpositive = [i for i, w in enumerate(weights) if w <= 0]
    if nonpositive:
        raise InfeasibleGameError(
            f"learners {nonpositive} lose more than the total cost {total:.6g} by sharing"
        )

    scheme = _normalize(weights, total)
    logger.debug(f"Payments for C n^a = {total:.6g}: {scheme.payments}")
    return scheme


def defection_margins(config: GameConfig, scheme: PaymentScheme) -> Tuple[float, ...]:
    """C n^alpha - u_l - p_l per learner; negative means the learner prefers to leave."""
    total = config.total_cost
    return tuple(total - u - p for u, p in zip(config.u_reductions, scheme.payments))


def verify_no_defection(config: GameConfig, scheme: PaymentScheme) -> bool:
    """True iff every learner weakly prefers paying its share of the agnostic prefilter."""
    if len(scheme.payments) != config.num_learners:
        raise DomainError(
            f"scheme has {len(scheme.payments)} payments for {config.num_learners} learners"
        )
    slack = DEFECTION_TOLERANCE * config.total_cost
    return all(margin >= -slack for margin in defection_margins(config, scheme))


def mean_estimation_price(
    config: LipschitzGameConfig,
    u_red: Callable[[float, float], float],
    normalized: bool = False,
) -> float:
    """
    Price of the shared prefilter for Huber mean estimation on surrogate risks:
    sum over learners of u_red(bound for the largest delta, bound for delta_i).
    normalized=True divides by the number of learners.
    """
    worst = config.surrogate_risk(config.deltas.max_delta)
    price = math.fsum(u_red(worst, config.surrogate_risk(d)) for d in config.deltas)
    if normalized:
        price /= config.num_learners
    return price


def lipschitz_threshold(config: LipschitzGameConfig) -> float:
    """(L N / (C (N - 1)) * (delta_N^2 - delta_1^2))^(1/alpha); compare n >= threshold."""
    count = config.num_learners
    if count < 2:
        raise DomainError(f"participation threshold needs at least 2 learners, got {count}")
    spread = config.deltas.max_delta**2 - config.deltas.min_delta**2
    base = config.lipschitz * count / (config.cost_scale * (count - 1)) * spread
    return base ** (1.0 / config.cost_exponent)


def lipschitz_payments(config: LipschitzGameConfig) -> PaymentScheme:
    """
    Budget-balanced payments p_i proportional to C n^alpha - L (delta_N^2 - delta_i^2).

    Raises:
        InfeasibleGameError: n is below the threshold, or a weight is nonpositive
    """
    total = config.total_cost
    if config.num_learners >= 2:
        threshold = lipschitz_threshold(config)
        if config.n < threshold:
            raise InfeasibleGameError(f"n={config.n} is below the participation threshold {threshold:.6g}")

    weights = [total - r for r in config.reductions()]
    if any(w <= 0 for w in weights):
        raise InfeasibleGameError(f"a learner loses more than the total cost {total:.6g} by sharing")
    return _normalize(weights, total)


def as_game(config: LipschitzGameConfig) -> GameConfig:
    """The equivalent absolute-units game, for defection checks on Lipschitz schemes."""
    return GameConfig(
        cost_scale=config.cost_scale,
        cost_exponent=config.cost_exponent,
        n=config.n,
        u_reductions=config.reductions(),
    )


__all__ = [
    "GameConfig",
    "PaymentScheme",
    "LipschitzGameConfig",
    "participation_threshold",
    "lemma3_payments",
    "defection_margins",
    "verify_no_defection",
    "mean_estimation_price",
    "lipschitz_threshold",
    "lipschitz_payments",
    "as_game",
]
