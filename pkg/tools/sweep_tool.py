"""
Sweep Tool for the prefiltering simulator.
Min-max experiment harness over noise means and prefilter hyperparameters,
replication statistics, the epsilon and heterogeneity protocols, and the
price of learner-agnostic prefiltering.

Cell layout: one contaminated sample per (epsilon, replication, noise mean),
shared by every prefilter setting and every learner of that cell. The worst
case over noise means is taken on the agnostic (learner-max) risk, then the
hyperparameter minimising it is selected; ties go to the smaller value.
"""

import json
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from config.settings import settings
from pipeline.runner import run_tasks
from tools.contamination_tool import ContaminationSpec, GaussianTarget, Seed, derive_seed, draw_contaminated
from tools.huber_tool import LearnerSet, huber_estimate
from tools.prefilter_tool import PrefilterKind, PrefilterSpec, apply, validate_param
from tools.risk_tool import RiskReport, evaluate_estimates, agnostic_risk_bound
from utils.errors import ConfigError, EmptySampleError, IncompleteGridError

logger = logging.getLogger(__name__)

# (noise mean, hyperparameter) -> report, for one (epsilon, kind, replication)
CellTable = Mapping[Tuple[float, float], RiskReport]
UtilityReduction = Callable[[float, float], float]


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def default_noise_grid() -> Tuple[float, ...]:
    low, high = settings.NOISE_GRID_RANGE
    return tuple(float(m) for m in np.linspace(low, high, settings.NOISE_GRID_SIZE))


def default_param_grid() -> Dict[PrefilterKind, Tuple[float, ...]]:
    size = settings.PARAM_GRID_SIZE
    q_low, q_high = settings.QUANTILE_GRID_RANGE
    s_low, s_high = settings.SCALE_GRID_RANGE
    scale_grid = tuple(float(v) for v in np.logspace(np.log10(s_low), np.log10(s_high), size))
    return {
        PrefilterKind.QUANTILE: tuple(float(v) for v in np.linspace(q_low, q_high, size)),
        PrefilterKind.ZSCORE: scale_grid,
        PrefilterKind.SDO: scale_grid,
    }


_CONFIG_KEYS = (
    "target", "n", "epsilons", "noise_grid", "param_grid",
    "learners", "replications", "confidence", "seed",
)


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def validate_experiment_config(data: Mapping) -> dict:
    """
    Validate a serialized experiment configuration.

    Args:
        data (Mapping): Configuration in its JSON form

    Returns:
        dict: is_valid plus one field-level message per issue
    """
    issues = []
    if not isinstance(data, Mapping):
        return {"is_valid": False, "issues": ["config: expected a JSON object"]}

    for key in data:
        if key not in _CONFIG_KEYS:
            issues.append(f"{key}: unknown field")
    for key in _CONFIG_KEYS:
        if key not in data:
            issues.append(f"{key}: missing field")

    target = data.get("target")
    if "target" in data:
        if not isinstance(target, Mapping):
            issues.append("target: expected an object with theta and sigma")
        else:
            if not _is_number(target.get("theta")):
                issues.append("target.theta: expected a finite number")
            if not (_is_number(target.get("sigma")) and target.get("sigma") > 0):
                issues.append("target.sigma: expected a positive number")

    if "n" in data and not (_is_int(data["n"]) and data["n"] >= 1):
        issues.append(f"n: expected a positive integer, got {data['n']!r}")

    if "epsilons" in data:
        epsilons = data["epsilons"]
        if not isinstance(epsilons, list) or not epsilons:
            issues.append("epsilons: expected a nonempty list")
        else:
            for i, eps in enumerate(epsilons):
                if not (_is_number(eps) and 0 <= eps < 0.5):
                    issues.append(f"epsilons[{i}]: expected a number in [0, 1/2), got {eps!r}")

    if "noise_grid" in data:
        grid = data["noise_grid"]
        if not isinstance(grid, list) or not grid:
            issues.append("noise_grid: expected a nonempty list")
        else:
            for i, m in enumerate(grid):
                if not (_is_number(m) and m >= 0):
                    issues.append(f"noise_grid[{i}]: expected a finite nonnegative number, got {m!r}")
            if len(set(grid)) != len(grid):
                issues.append("noise_grid: values must be distinct")

    if "param_grid" in data:
        grid = data["param_grid"]
        if not isinstance(grid, Mapping) or not grid:
            issues.append("param_grid: expected a nonempty object of kind -> list")
        else:
            for kind, params in grid.items():
                try:
                    kind = PrefilterKind(kind)
                except ValueError:
                    issues.append(f"param_grid.{kind}: unknown prefilter kind")
                    continue
                if not isinstance(params, list) or not params:
                    issues.append(f"param_grid.{kind.value}: expected a nonempty list")
                    continue
                for i, param in enumerate(params):
                    if not _is_number(param):
                        issues.append(f"param_grid.{kind.value}[{i}]: expected a number, got {param!r}")
                        continue
                    for issue in validate_param(kind, param):
                        issues.append(f"param_grid.{kind.value}[{i}]: {issue.split(': ', 1)[1]}")
                if len(set(params)) != len(params):
                    issues.append(f"param_grid.{kind.value}: values must be distinct")

    if "learners" in data:
        learners = data["learners"]
        if not isinstance(learners, list) or not learners:
            issues.append("learners: expected a nonempty list of deltas")
        else:
            for i, delta in enumerate(learners):
                if not (_is_number(delta) and delta >= 0):
                    issues.append(f"learners[{i}]: expected a nonnegative number, got {delta!r}")

    if "replications" in data and not (_is_int(data["replications"]) and data["replications"] >= 1):
        issues.append(f"replications: expected a positive integer, got {data['replications']!r}")

    if "confidence" in data and not (_is_number(data["confidence"]) and 0 < data["confidence"] < 1):
        issues.append(f"confidence: expected a number in (0, 1), got {data['confidence']!r}")

    if "seed" in data and not (_is_int(data["seed"]) and 0 <= data["seed"] < 2**64):
        issues.append(f"seed: expected an unsigned 64-bit integer, got {data['seed']!r}")

    return {"is_valid": len(issues) == 0, "issues": issues}


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of a sweep."""

    target: GaussianTarget = field(default_factory=lambda: GaussianTarget(settings.DEFAULT_THETA, settings.DEFAULT_SIGMA))
    n: int = settings.DEFAULT_SAMPLE_SIZE
    epsilons: Tuple[float, ...] = settings.DEFAULT_EPSILONS
    noise_grid: Tuple[float, ...] = field(default_factory=default_noise_grid)
    param_grid: Dict[PrefilterKind, Tuple[float, ...]] = field(default_factory=default_param_grid)
    learners: LearnerSet = field(default_factory=lambda: LearnerSet(settings.DEFAULT_DELTAS))
    replications: int = settings.DEFAULT_REPLICATIONS
    confidence: float = settings.DEFAULT_CONFIDENCE
    seed: Seed = field(default_factory=lambda: Seed(settings.DEFAULT_SEED))

    def __post_init__(self):
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        object.__setattr__(self, "noise_grid", tuple(float(m) for m in self.noise_grid))
        object.__setattr__(
            self,
            "param_grid",
            {PrefilterKind(kind): tuple(float(p) for p in params) for kind, params in self.param_grid.items()},
        )
        if not isinstance(self.learners, LearnerSet):
            object.__setattr__(self, "learners", LearnerSet.of(self.learners))
        if not isinstance(self.seed, Seed):
            object.__setattr__(self, "seed", Seed(int(self.seed)))
        validation = validate_experiment_config(self.to_dict())
        if not validation["is_valid"]:
            raise ConfigError("invalid experiment config", validation["issues"])

    @property
    def kinds(self) -> List[PrefilterKind]:
        return [kind for kind in PrefilterKind if kind in self.param_grid]

    def specs(self, kinds: Optional[Iterable[PrefilterKind]] = None) -> List[PrefilterSpec]:
        selected = self.kinds if kinds is None else [PrefilterKind(k) for k in kinds]
        return [PrefilterSpec(kind, param) for kind in selected for param in self.param_grid[kind]]

    def to_dict(self) -> dict:
        return {
            "target": {"theta": self.target.theta, "sigma": self.target.sigma},
            "n": self.n,
            "epsilons": list(self.epsilons),
            "noise_grid": list(self.noise_grid),
            "param_grid": {kind.value: list(params) for kind, params in self.param_grid.items()},
            "learners": list(self.learners.deltas),
            "replications": self.replications,
            "confidence": self.confidence,
            "seed": self.seed.base,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ExperimentConfig":
        validation = validate_experiment_config(data)
        if not validation["is_valid"]:
            raise ConfigError("invalid experiment config", validation["issues"])
        return cls(
            target=GaussianTarget(float(data["target"]["theta"]), float(data["target"]["sigma"])),
            n=int(data["n"]),
            epsilons=tuple(data["epsilons"]),
            noise_grid=tuple(data["noise_grid"]),
            param_grid={PrefilterKind(k): tuple(v) for k, v in data["param_grid"].items()},
            learners=LearnerSet.of(data["learners"]),
            replications=int(data["replications"]),
            confidence=float(data["confidence"]),
            seed=Seed(int(data["seed"])),
        )


def default_experiment_config(**overrides) -> ExperimentConfig:
    """The standard protocol, with selected fields replaced."""
    return replace(ExperimentConfig(), **overrides)


def load_experiment_config(path: str) -> ExperimentConfig:
    """
    Load a JSON experiment config.

    Raises:
        ConfigError: malformed JSON or invalid fields
        OSError: the file cannot be read
    """
    with open(path, "rb") as handle:
        raw = handle.read()
    try:
        data = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as e:
        line_number = raw.count(b"\n", 0, e.start) + 1
        raise ConfigError(f"cannot parse {path}", [f"line {line_number}: not valid UTF-8"]) from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"cannot parse {path}", [f"line {e.lineno}: {e.msg}"]) from None
    config = ExperimentConfig.from_dict(data)
    logger.info(f"Loaded experiment config from {path}")
    return config


# ---------------------------------------------------------------------------
# Cells
# ---------------------------------------------------------------------------

def cell_seed(config: ExperimentConfig, epsilon_index: int, replication: int, m_index: int) -> Seed:
    """Seed of the sample shared by one (epsilon, replication, noise mean) cell."""
    grid_index = epsilon_index * len(config.noise_grid) + m_index
    return derive_seed(config.seed, replication, grid_index)


def run_cell(
    config: ExperimentConfig,
    epsilon: float,
    m: float,
    replication: int,
    kinds: Optional[Iterable[PrefilterKind]] = None,
) -> Dict[PrefilterSpec, RiskReport]:
    """
    Draw the cell's sample once and evaluate every prefilter setting and learner on it.

    Returns:
        Dict[PrefilterSpec, RiskReport]: one report per (kind, param)
    """
    try:
        epsilon_index = config.epsilons.index(float(epsilon))
        m_index = config.noise_grid.index(float(m))
    except ValueError:
        raise ConfigError("cell outside the configured grids", [f"epsilon={epsilon}, m={m}"]) from None

    seed = cell_seed(config, epsilon_index, replication, m_index)
    sample = draw_contaminated(config.target, ContaminationSpec(float(epsilon), float(m)), config.n, seed)

    reports = {}
    for spec in config.specs(kinds):
        try:
            filtered = apply(spec, sample)
        except EmptySampleError:
            logger.warning(f"{spec.kind.value}({spec.param:.4g}) removed every point at eps={epsilon}, m={m}")
            reports[spec] = RiskReport.unbounded(config.learners)
            continue
        estimates = {delta: huber_estimate(filtered, delta) for delta in config.learners}
        reports[spec] = evaluate_estimates(estimates, config.target.theta)
    return reports


def _cell_worker(config: ExperimentConfig, epsilon: float, m: float, replication: int, kinds) -> Dict[PrefilterSpec, RiskReport]:
    return run_cell(config, epsilon, m, replication, kinds)


# ---------------------------------------------------------------------------
# Min-max reductions
# ---------------------------------------------------------------------------

def _grid_axes(cells: CellTable) -> Tuple[List[float], List[float]]:
    if not cells:
        raise IncompleteGridError("empty grid")
    ms = sorted({m for m, _ in cells})
    params = sorted({p for _, p in cells})
    missing = [(m, p) for p in params for m in ms if (m, p) not in cells]
    if missing:
        raise IncompleteGridError(f"{len(missing)} missing (m, param) cells, first {missing[0]}")
    return ms, params


def _worst_over_noise(cells: CellTable, ms: Sequence[float], param: float, risk: Callable[[RiskReport], float]):
    worst_m, worst = ms[0], risk(cells[(ms[0], param)])
    for m in ms[1:]:
        value = risk(cells[(m, param)])
        if value > worst:
            worst_m, worst = m, value
    return worst_m, worst


def select_minmax_cell(
    cells: CellTable,
    risk: Callable[[RiskReport], float] = lambda report: report.agnostic,
) -> Tuple[float, float, float]:
    """
    Return (param, m, value) of min over param of max over m of risk.

    Ties go to the smaller param, and within a param to the smaller m.
    """
    ms, params = _grid_axes(cells)
    best = None
    for param in params:
        worst_m, worst = _worst_over_noise(cells, ms, param, risk)
        if best is None or worst < best[2]:
            best = (param, worst_m, worst)
    return best


def minmax_risk(cells: CellTable) -> float:
    """min over param of max over m of the agnostic risk."""
    return select_minmax_cell(cells)[2]


def maxmin_risk(cells: CellTable) -> float:
    """max over m of min over param of the agnostic risk."""
    ms, params = _grid_axes(cells)
    return max(min(cells[(m, p)].agnostic for p in params) for m in ms)


def heterogeneity_gap(cells: CellTable) -> float:
    """Gap (max - min learner risk) of the cell picked by the agnostic min-max."""
    param, m, _ = select_minmax_cell(cells)
    return cells[(m, param)].gap


def aggregate(values: Sequence[float]) -> Tuple[float, float]:
    """Mean and standard error (sample std with divisor n-1, over sqrt(n))."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("aggregate needs at least one value")
    center = float(np.mean(values))
    if values.size == 1:
        return center, 0.0
    return center, float(np.std(values, ddof=1) / np.sqrt(values.size))


# ---------------------------------------------------------------------------
# Price of learner-agnostic prefiltering
# ---------------------------------------------------------------------------

def relative_reduction(r_agnostic: float, r_specific: float) -> float:
    """(R1 - R2) / R2; 0 when both are 0 and +inf when only R2 is 0."""
    if r_specific == 0:
        return 0.0 if r_agnostic == 0 else math.inf
    return (r_agnostic - r_specific) / r_specific


def absolute_reduction(r_agnostic: float, r_specific: float) -> float:
    """R1 - R2."""
    return r_agnostic - r_specific


def lipschitz_reduction(lipschitz: float) -> UtilityReduction:
    """Reduction L * (R1 - R2), from the utility R(r) = -L * r."""
    def reduction(r_agnostic: float, r_specific: float) -> float:
        return lipschitz * (r_agnostic - r_specific)
    return reduction


@dataclass(frozen=True)
class PriceReport:
    """Per-learner optima, the agnostic choice and the resulting price P(F)."""

    per_learner_optimum: Dict[float, Tuple[float, float]]
    agnostic_choice: Tuple[float, float]
    price: float
    reductions: Dict[float, float]
    degenerate: bool = False


def price_of_larp(cells: CellTable, u_red: UtilityReduction = relative_reduction) -> PriceReport:
    """
    Price of learner-agnostic prefiltering on one shared per-cell risk table.

    Each learner's specific optimum minimises its own worst-case risk over the
    noise grid; the agnostic choice minimises the worst-case agnostic risk.
    """
    _grid_axes(cells)
    deltas = sorted(next(iter(cells.values())).per_learner)
    ms = sorted({m for m, _ in cells})

    agnostic_param, _, agnostic_risk = select_minmax_cell(cells)

    optima = {}
    reductions = {}
    for delta in deltas:
        def learner_risk(report, delta=delta):
            return report.per_learner[delta]

        best_param, _, best_risk = select_minmax_cell(cells, learner_risk)
        _, shared_risk = _worst_over_noise(cells, ms, agnostic_param, learner_risk)
        optima[delta] = (best_param, best_risk)
        reductions[delta] = u_red(shared_risk, best_risk)

    price = math.fsum(reductions.values()) / len(reductions)
    degenerate = any(math.isinf(r) for r in reductions.values())
    if degenerate:
        logger.warning("Price report is degenerate: a learner-specific optimum has zero risk")

    return PriceReport(
        per_learner_optimum=optima,
        agnostic_choice=(agnostic_param, agnostic_risk),
        price=price,
        reductions=reductions,
        degenerate=degenerate,
    )


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

class CellRecord(NamedTuple):
    epsilon: float
    kind: PrefilterKind
    replication: int
    m: float
    param: float
    delta: float
    risk: float


class ReplicationRecord(NamedTuple):
    epsilon: float
    kind: PrefilterKind
    replication: int
    r_agn: float
    gap: float


class AggregateRecord(NamedTuple):
    epsilon: float
    kind: PrefilterKind
    r_agn_mean: float
    r_agn_stderr: float
    gap_mean: float
    gap_stderr: float


class PriceRecord(NamedTuple):
    epsilon: float
    kind: PrefilterKind
    replication: int
    price: float
    degenerate: bool


@dataclass
class SweepResult:
    """Per-cell risks plus the min-max reductions derived from them."""

    per_cell: List[CellRecord]
    per_replication: List[ReplicationRecord]
    aggregated: List[AggregateRecord]
    prices: List[PriceRecord]

    def aggregate_for(self, epsilon: float, kind: PrefilterKind) -> AggregateRecord:
        for record in self.aggregated:
            if record.epsilon == epsilon and record.kind is PrefilterKind(kind):
                return record
        raise KeyError((epsilon, kind))

    def mean_price(self, epsilon: float, kind: PrefilterKind) -> Tuple[float, float]:
        values = [r.price for r in self.prices if r.epsilon == epsilon and r.kind is PrefilterKind(kind)]
        return aggregate(values)

    def smallest_mean_price(self, epsilon: float) -> Tuple[PrefilterKind, float]:
        """Filter kind with the smallest replication-averaged price at epsilon."""
        kinds = sorted({r.kind for r in self.prices if r.epsilon == epsilon}, key=list(PrefilterKind).index)
        means = [(kind, self.mean_price(epsilon, kind)[0]) for kind in kinds]
        return min(means, key=lambda item: item[1])


def collect_tables(
    config: ExperimentConfig, cells: Mapping[Tuple[int, int, int], Dict[PrefilterSpec, RiskReport]]
) -> Dict[Tuple[float, PrefilterKind, int], Dict[Tuple[float, float], RiskReport]]:
    """Regroup cell results keyed (eps index, rep, m index) into per-(eps, kind, rep) tables."""
    tables: Dict[Tuple[float, PrefilterKind, int], Dict[Tuple[float, float], RiskReport]] = {}
    for (e_idx, rep, m_idx), reports in sorted(cells.items()):
        epsilon, m = config.epsilons[e_idx], config.noise_grid[m_idx]
        for spec, report in reports.items():
            tables.setdefault((epsilon, spec.kind, rep), {})[(m, spec.param)] = report
    return tables


def evaluate_cells(
    config: ExperimentConfig,
    workers: Optional[int] = None,
    kinds: Optional[Iterable[PrefilterKind]] = None,
) -> Dict[Tuple[int, int, int], Dict[PrefilterSpec, RiskReport]]:
    """Run every (epsilon, replication, noise mean) cell, possibly in parallel."""
    kinds = None if kinds is None else tuple(PrefilterKind(k) for k in kinds)
    tasks = [
        ((e_idx, rep, m_idx), (config, epsilon, m, rep, kinds))
        for e_idx, epsilon in enumerate(config.epsilons)
        for rep in range(config.replications)
        for m_idx, m in enumerate(config.noise_grid)
    ]
    logger.info(
        f"Evaluating {len(tasks)} cells: {len(config.epsilons)} epsilons x "
        f"{config.replications} replications x {len(config.noise_grid)} noise means"
    )
    return run_tasks(_cell_worker, tasks, workers)


def run_experiment(
    config: ExperimentConfig,
    workers: Optional[int] = None,
    u_red: UtilityReduction = relative_reduction,
) -> SweepResult:
    """
    Full factorial sweep epsilon x kind x replication x m x param x delta.

    Deterministic given config.seed, whatever the number of workers.
    """
    tables = collect_tables(config, evaluate_cells(config, workers))
    kind_order = list(PrefilterKind)

    per_cell: List[CellRecord] = []
    per_replication: List[ReplicationRecord] = []
    prices: List[PriceRecord] = []
    for epsilon, kind, rep in sorted(tables, key=lambda k: (k[0], kind_order.index(k[1]), k[2])):
        table = tables[(epsilon, kind, rep)]
        for (m, param) in sorted(table):
            for delta, risk in sorted(table[(m, param)].per_learner.items()):
                per_cell.append(CellRecord(epsilon, kind, rep, m, param, delta, risk))
        per_replication.append(ReplicationRecord(epsilon, kind, rep, minmax_risk(table), heterogeneity_gap(table)))
        price = price_of_larp(table, u_red)
        prices.append(PriceRecord(epsilon, kind, rep, price.price, price.degenerate))

    aggregated: List[AggregateRecord] = []
    for epsilon in config.epsilons:
        for kind in config.kinds:
            rows = [r for r in per_replication if r.epsilon == epsilon and r.kind is kind]
            r_mean, r_err = aggregate([r.r_agn for r in rows])
            g_mean, g_err = aggregate([r.gap for r in rows])
            aggregated.append(AggregateRecord(epsilon, kind, r_mean, r_err, g_mean, g_err))
            logger.info(f"eps={epsilon:.3g} {kind.value}: R_agn={r_mean:.4g} +/- {r_err:.2g}, gap={g_mean:.4g}")

    return SweepResult(per_cell=per_cell, per_replication=per_replication, aggregated=aggregated, prices=prices)


class HeterogeneityRecord(NamedTuple):
    delta2: float
    kind: PrefilterKind
    gap_mean: float
    gap_stderr: float


def restrict_report(report: RiskReport, deltas: Iterable[float]) -> RiskReport:
    """The report a smaller learner set would have produced on the same estimates."""
    return RiskReport.from_risks({delta: report.per_learner[float(delta)] for delta in deltas})


def run_heterogeneity_experiment(
    config: ExperimentConfig,
    delta1: float = settings.HETERO_DELTA1,
    delta2_grid: Sequence[float] = settings.HETERO_DELTA2_GRID,
    epsilon: float = settings.HETERO_EPSILON,
    workers: Optional[int] = None,
) -> List[HeterogeneityRecord]:
    """
    Gap between best- and worst-case learner risk for Delta = {delta1, delta2}.

    All learner pairs are evaluated on the same cells; each pair runs its own
    min-max selection on its own agnostic risk.
    """
    union = LearnerSet.of(sorted({float(delta1), *(float(d) for d in delta2_grid)}))
    sweep_config = replace(config, epsilons=(float(epsilon),), learners=union)
    tables = collect_tables(sweep_config, evaluate_cells(sweep_config, workers))

    records = []
    for delta2 in delta2_grid:
        pair = {float(delta1), float(delta2)}
        for kind in sweep_config.kinds:
            gaps = []
            for rep in range(sweep_config.replications):
                table = tables[(float(epsilon), kind, rep)]
                restricted = {key: restrict_report(report, pair) for key, report in table.items()}
                gaps.append(heterogeneity_gap(restricted))
            gap_mean, gap_err = aggregate(gaps)
            records.append(HeterogeneityRecord(float(delta2), kind, gap_mean, gap_err))
            logger.info(f"delta2={delta2:.3g} {kind.value}: gap={gap_mean:.4g} +/- {gap_err:.2g}")
    return records


@dataclass(frozen=True)
class BoundCheck:
    bound: float
    slack: float
    risks: Tuple[float, ...]
    within: int

    @property
    def fraction_within(self) -> float:
        return self.within / len(self.risks)


def check_risk_bound(
    config: ExperimentConfig,
    epsilon: float,
    replications: int,
    slack: float = settings.RISK_BOUND_SLACK,
    workers: Optional[int] = None,
) -> BoundCheck:
    """Count the replications whose quantile min-max agnostic risk stays below slack * bound."""
    params = config.param_grid.get(PrefilterKind.QUANTILE, default_param_grid()[PrefilterKind.QUANTILE])
    check_config = replace(
        config,
        epsilons=(float(epsilon),),
        param_grid={PrefilterKind.QUANTILE: params},
        replications=int(replications),
    )
    tables = collect_tables(check_config, evaluate_cells(check_config, workers))
    risks = tuple(minmax_risk(tables[(float(epsilon), PrefilterKind.QUANTILE, rep)]) for rep in range(replications))
    bound = agnostic_risk_bound(float(epsilon), config.n, config.target.sigma, config.confidence, config.learners)
    within = sum(1 for risk in risks if risk <= slack * bound)
    logger.info(f"Risk bound check: {within}/{replications} replications within {slack} x {bound:.4g}")
    return BoundCheck(bound=bound, slack=slack, risks=risks, within=within)


__all__ = [
    "ExperimentConfig",
    "validate_experiment_config",
    "default_experiment_config",
    "load_experiment_config",
    "default_noise_grid",
    "default_param_grid",
    "cell_seed",
    "run_cell",
    "select_minmax_cell",
    "minmax_risk",
    "maxmin_risk",
    "heterogeneity_gap",
    "aggregate",
    "relative_reduction",
    "absolute_reduction",
    "lipschitz_reduction",
    "PriceReport",
    "price_of_larp",
    "CellRecord",
    "ReplicationRecord",
    "AggregateRecord",
    "PriceRecord",
    "SweepResult",
    "collect_tables",
    "evaluate_cells",
    "run_experiment",
    "HeterogeneityRecord",
    "restrict_report",
    "run_heterogeneity_experiment",
    "BoundCheck",
    "check_risk_bound",
]
