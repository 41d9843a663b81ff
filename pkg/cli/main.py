"""
Command-line front end for the prefiltering simulator.

Subcommands: mean-exp, hetero-exp, filter, lowerbound, game.
Exit codes: 0 success, 2 config or usage error, 3 infeasible game, 4 I/O error.
"""

import argparse
import json
import logging
import sys
import time
from datetime import datetime, timezone
from typing import List, Optional, Sequence

import numpy as np

from config.settings import settings
from pipeline.runner import resolve_workers
from tools.contamination_tool import Sample
from tools.game_tool import (
    GameConfig,
    LipschitzGameConfig,
    as_game,
    defection_margins,
    lemma3_payments,
    lipschitz_payments,
    lipschitz_threshold,
    mean_estimation_price,
    participation_threshold,
)
from tools.huber_tool import LearnerSet
from tools.lowerbound_tool import BernoulliInstance, default_p1_grid, lowerbound_curve, separation
from tools.prefilter_tool import PrefilterKind, PrefilterSpec, apply, apply_quantile
from tools.sweep_tool import (
    ExperimentConfig,
    default_experiment_config,
    lipschitz_reduction,
    load_experiment_config,
    run_experiment,
    run_heterogeneity_experiment,
)
from utils.errors import (
    ConfigError,
    DomainError,
    EmptySampleError,
    InfeasibleGameError,
    ScalarParseError,
    UndefinedRankError,
)
from utils.storage_utils import OutputManager, format_cell

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


class OutputWriteError(OSError):
    """An output file could not be written."""


def _check_write(result: dict) -> dict:
    if result["status"] != "success":
        raise OutputWriteError(result.get("error", f"failed to write {result.get('path')}"))
    return result


def _format_scalar(value: float) -> str:
    # shortest round-trip form: 10 stays "10", 0.1 stays "0.1"
    return np.format_float_positional(value, trim="-")


def _csv_text(header: Sequence[str], rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_cell(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Experiment configuration
# ---------------------------------------------------------------------------

def resolve_experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    """File (or the default protocol) first, then flag overrides; flags win."""
    config = load_experiment_config(args.config) if args.config else default_experiment_config()
    data = config.to_dict()
    if getattr(args, "epsilons", None) is not None:
        data["epsilons"] = list(args.epsilons)
    if args.n is not None:
        data["n"] = args.n
    if args.reps is not None:
        data["replications"] = args.reps
    if args.seed is not None:
        data["seed"] = args.seed
    if getattr(args, "learners", None) is not None:
        data["learners"] = list(args.learners)
    if args.kinds is not None:
        unknown = [kind for kind in args.kinds if kind not in data["param_grid"]]
        if unknown:
            raise ConfigError("invalid --kinds", [f"kinds: {kind} has no parameter grid" for kind in unknown])
        data["param_grid"] = {kind: data["param_grid"][kind] for kind in args.kinds}
    return ExperimentConfig.from_dict(data)


def _manifest(command: str, config: ExperimentConfig, workers: int, started: float, outputs: dict, extra=None) -> dict:
    manifest = {
        "command": command,
        "config": config.to_dict(),
        "artifact_version": settings.ARTIFACT_VERSION,
        "seed": config.seed.base,
        "started_at": datetime.fromtimestamp(started, tz=timezone.utc).isoformat(),
        "wall_clock_seconds": time.time() - started,
        "workers": workers,
        "outputs": outputs,
    }
    if extra:
        manifest.update(extra)
    return manifest


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_mean_exp(args: argparse.Namespace) -> int:
    """Epsilon sweep: per-cell risks, replication statistics, aggregates and prices."""
    started = time.time()
    config = resolve_experiment_config(args)
    workers = resolve_workers(args.workers)
    output = OutputManager(args.output_dir)

    result = run_experiment(config, workers=workers)

    outputs = {}
    outputs["cells"] = _check_write(output.write_csv(
        "cells.csv",
        ["epsilon", "kind", "rep", "m", "param", "delta", "risk"],
        result.per_cell,
    ))["path"]
    outputs["replications"] = _check_write(output.write_csv(
        "replications.csv",
        ["epsilon", "kind", "rep", "r_agn", "gap"],
        result.per_replication,
    ))["path"]
    outputs["aggregate"] = _check_write(output.write_csv(
        "aggregate.csv",
        ["epsilon", "kind", "r_agn_mean", "r_agn_stderr"],
        [(r.epsilon, r.kind, r.r_agn_mean, r.r_agn_stderr) for r in result.aggregated],
    ))["path"]
    outputs["price"] = _check_write(output.write_csv(
        "price.csv",
        ["epsilon", "kind", "rep", "price", "degenerate"],
        result.prices,
    ))["path"]

    manifest = _manifest("mean-exp", config, workers, started, outputs)
    _check_write(output.write_json("manifest.json", manifest))
    logger.info(f"mean-exp finished in {manifest['wall_clock_seconds']:.1f}s, outputs in {output.base_dir}")
    return EXIT_OK


def cmd_hetero_exp(args: argparse.Namespace) -> int:
    """Heterogeneity sweep over delta2 at a fixed contamination ratio."""
    started = time.time()
    config = resolve_experiment_config(args)
    workers = resolve_workers(args.workers)
    output = OutputManager(args.output_dir)

    delta2_grid = tuple(args.delta2) if args.delta2 is not None else settings.HETERO_DELTA2_GRID
    records = run_heterogeneity_experiment(
        config, delta1=args.delta1, delta2_grid=delta2_grid, epsilon=args.epsilon, workers=workers
    )

    outputs = {
        "hetero": _check_write(output.write_csv(
            "hetero.csv", ["delta2", "kind", "gap_mean", "gap_stderr"], records
        ))["path"]
    }
    protocol = {"epsilon": args.epsilon, "delta1": args.delta1, "delta2_grid": list(delta2_grid)}
    manifest = _manifest("hetero-exp", config, workers, started, outputs, {"protocol": protocol})
    _check_write(output.write_json("manifest.json", manifest))
    return EXIT_OK


def cmd_filter(args: argparse.Namespace) -> int:
    """Apply one prefilter to a newline-delimited scalar file and print what it keeps."""
    spec = PrefilterSpec(args.kind, args.param)
    sample = Sample.of(OutputManager().read_scalars(args.input))
    try:
        if args.centered and spec.kind is PrefilterKind.QUANTILE:
            retained = apply_quantile(sample, spec.param, centered=True)
        else:
            retained = apply(spec, sample)
    except EmptySampleError as e:
        logger.warning(f"Nothing retained: {e}")
        return EXIT_OK
    for value in retained.values:
        sys.stdout.write(_format_scalar(value) + "\n")
    logger.info(f"{spec.kind.value}({spec.param}) kept {retained.n} of {sample.n} points")
    return EXIT_OK


def cmd_lowerbound(args: argparse.Namespace) -> int:
    """Closed-form Bernoulli curve (p1, theta0, theta_quarter, theta2, r_agn) as CSV."""
    instance = BernoulliInstance(args.epsilon, args.theta)
    grid = default_p1_grid(args.grid_size)
    curve = lowerbound_curve(instance, grid)
    header = ["p1", "theta0", "theta_quarter", "theta2", "r_agn"]
    rows = [(p.p1, p.theta0, p.theta_quarter, p.theta2, p.r_agn) for p in curve]
    separation(instance, grid)

    if args.output:
        _check_write(OutputManager(".").write_csv(args.output, header, rows))
    else:
        sys.stdout.write(_csv_text(header, rows))
    return EXIT_OK


def _game_report(game: GameConfig, threshold: Optional[float], payments_func) -> dict:
    report = {
        "status": "success",
        "total_cost": game.total_cost,
        "threshold": threshold,
        "u_reductions": list(game.u_reductions),
    }
    try:
        scheme = payments_func()
    except InfeasibleGameError as e:
        report.update({"status": "failed", "feasible": False, "error": str(e)})
        return report
    report.update({
        "feasible": True,
        "payments": list(scheme.payments),
        "defection_margins": list(defection_margins(game, scheme)),
    })
    return report


def cmd_game(args: argparse.Namespace) -> int:
    """Participation threshold, payments and defection margins as JSON on stdout."""
    if args.lipschitz is not None:
        config = LipschitzGameConfig(
            lipschitz=args.lipschitz,
            deltas=LearnerSet.of(args.deltas),
            cost_scale=args.C,
            cost_exponent=args.alpha,
            n=args.n,
            epsilon=args.epsilon,
            sigma=args.sigma,
            delta0=args.delta0,
        )
        game = as_game(config)
        threshold = lipschitz_threshold(config) if config.num_learners >= 2 else None
        report = _game_report(game, threshold, lambda: lipschitz_payments(config))
        report["mode"] = "lipschitz"
        report["mean_estimation_price"] = mean_estimation_price(
            config, lipschitz_reduction(config.lipschitz), normalized=args.normalized
        )
    else:
        game = GameConfig(cost_scale=args.C, cost_exponent=args.alpha, n=args.n, u_reductions=tuple(args.reductions))
        threshold = (
            participation_threshold(game.cost_scale, game.cost_exponent, game.num_learners, game.price)
            if game.num_learners >= 2
            else None
        )
        report = _game_report(game, threshold, lambda: lemma3_payments(game))
        report["mode"] = "lemma3"
        report["price"] = game.price

    sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report["feasible"] else EXIT_INFEASIBLE


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_experiment_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON experiment config; flags override its fields")
    parser.add_argument("--n", type=int, help="sample size")
    parser.add_argument("--reps", type=int, help="number of replications")
    parser.add_argument("--seed", type=int, help=f"base seed (default: LARP_SEED or {settings.DEFAULT_SEED})")
    parser.add_argument("--kinds", nargs="+", choices=[k.value for k in PrefilterKind], help="prefilter kinds to sweep")
    parser.add_argument("--workers", type=int, help="worker processes (default: available cores)")
    parser.add_argument("--output-dir", default=None, help=f"output directory (default: {settings.OUTPUT_DIR})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="larp",
        description="Learner-agnostic robust prefiltering for scalar mean estimation",
    )
    parser.add_argument(
        "--log-level",
        default="DEBUG" if settings.DEBUG else settings.LOG_LEVEL,
        help="logging level (default: LOG_LEVEL, or DEBUG when DEBUG=true)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    mean_exp = subparsers.add_parser("mean-exp", help="min-max risk as a function of epsilon")
    _add_experiment_arguments(mean_exp)
    mean_exp.add_argument("--epsilons", type=float, nargs="+", help="contamination ratios")
    mean_exp.add_argument("--learners", type=float, nargs="+", help="Huber parameters of the learners")
    mean_exp.set_defaults(func=cmd_mean_exp)

    hetero_exp = subparsers.add_parser("hetero-exp", help="heterogeneity gap as a function of delta2")
    _add_experiment_arguments(hetero_exp)
    hetero_exp.add_argument("--epsilon", type=float, default=settings.HETERO_EPSILON)
    hetero_exp.add_argument("--delta1", type=float, default=settings.HETERO_DELTA1)
    hetero_exp.add_argument("--delta2", type=float, nargs="+", help="delta2 grid")
    hetero_exp.set_defaults(func=cmd_hetero_exp)

    filter_cmd = subparsers.add_parser("filter", help="apply a prefilter to a file of scalars")
    filter_cmd.add_argument("input", help="newline-delimited decimal scalars")
    filter_cmd.add_argument("--kind", required=True, choices=[k.value for k in PrefilterKind])
    filter_cmd.add_argument("--param", required=True, type=float, help="p for quantile/sdo, l for zscore")
    filter_cmd.add_argument("--centered", action="store_true", help="quantile rank distance from (n+1)/2")
    filter_cmd.set_defaults(func=cmd_filter)

    lowerbound = subparsers.add_parser("lowerbound", help="Bernoulli lower-bound curve")
    lowerbound.add_argument("--epsilon", type=float, default=0.2)
    lowerbound.add_argument("--grid-size", type=int, default=1001)
    lowerbound.add_argument("--theta", choices=["low", "high"], default="low", help="(1 - eps)/2 or (1 + eps)/2")
    lowerbound.add_argument("--output", help="CSV path instead of stdout")
    lowerbound.set_defaults(func=cmd_lowerbound)

    game = subparsers.add_parser("game", help="cost-sharing payments")
    game.add_argument("--C", type=float, required=True, help="cost scale")
    game.add_argument("--alpha", type=float, required=True, help="cost exponent")
    game.add_argument("--n", type=int, required=True, help="dataset size")
    mode = game.add_mutually_exclusive_group(required=True)
    mode.add_argument("--reductions", type=float, nargs="+", help="per-learner utility reductions")
    mode.add_argument("--lipschitz", type=float, help="Lipschitz constant L of the utility")
    game.add_argument("--deltas", type=float, nargs="+", help="Huber parameters (with --lipschitz)")
    game.add_argument("--epsilon", type=float, default=0.0)
    game.add_argument("--sigma", type=float, default=settings.DEFAULT_SIGMA)
    game.add_argument("--delta0", type=float, default=settings.DEFAULT_CONFIDENCE)
    game.add_argument("--normalized", action="store_true", help="divide the explicit price by the learner count")
    game.set_defaults(func=cmd_game)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "game" and args.lipschitz is not None and not args.deltas:
        parser.error("--lipschitz requires --deltas")

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.func(args)
    except (ConfigError, DomainError, UndefinedRankError, ScalarParseError) as e:
        logger.error(str(e))
        return EXIT_USAGE
    except InfeasibleGameError as e:
        logger.error(str(e))
        return EXIT_INFEASIBLE
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO


__all__ = [
    "build_parser",
    "main",
    "resolve_experiment_config",
    "cmd_mean_exp",
    "cmd_hetero_exp",
    "cmd_filter",
    "cmd_lowerbound",
    "cmd_game",
]
