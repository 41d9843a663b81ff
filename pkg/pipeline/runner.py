"""
Pipeline runner for the prefiltering simulator.
Fans independent experiment cells out to a process pool and merges the
results by key, so the output never depends on the schedule.
"""

import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Callable, Dict, Hashable, Iterable, Optional, Tuple

from config.settings import settings

logger = logging.getLogger(__name__)

# (key, positional arguments) for one independent unit of work
Task = Tuple[Hashable, tuple]


def resolve_workers(workers: Optional[int]) -> int:
    """Clamp the requested parallelism; None means the configured default."""
    if workers is None:
        workers = settings.WORKERS
    return max(1, min(int(workers), os.cpu_count() or 1))


def run_tasks(func: Callable[..., Any], tasks: Iterable[Task], workers: Optional[int] = None) -> Dict[Hashable, Any]:
    """
    Evaluate func(*args) for every task and return {key: result}.

    func must be a module-level function so it can be pickled into worker
    processes. With one worker everything runs inline in this process.
    """
    tasks = list(tasks)
    workers = resolve_workers(workers)
    results: Dict[Hashable, Any] = {}

    if workers == 1 or len(tasks) <= 1:
        for index, (key, args) in enumerate(tasks, start=1):
            results[key] = func(*args)
            if index % 100 == 0:
                logger.debug(f"Completed {index}/{len(tasks)} tasks")
        return results

    logger.info(f"Running {len(tasks)} tasks on {workers} worker processes")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(func, *args): key for key, args in tasks}
        for index, future in enumerate(as_completed(futures), start=1):
            results[futures[future]] = future.result()
            if index % 100 == 0:
                logger.debug(f"Completed {index}/{len(tasks)} tasks")
    return results


def get_pipeline_config(workers: Optional[int] = None) -> dict:
    """
    Describe the experiment pipeline.

    Returns:
        dict: Stages and execution settings of the pipeline
    """
    return {
        "pipeline_name": "PrefilteringSweep",
        "workers": resolve_workers(workers),
        "stages": [
            "1. Seed derivation per (epsilon, replication, noise mean)",
            "2. Parallel cell evaluation:",
            "   - draw one contaminated sample",
            "   - apply every prefilter setting",
            "   - run every Huber learner",
            "3. Min-max reduction over noise means and hyperparameters",
            "4. Aggregation over replications and price of learner-agnostic prefiltering",
        ],
        "artifact_version": settings.ARTIFACT_VERSION,
    }


def validate_pipeline(workers: Optional[int] = None) -> dict:
    """
    Validate that the pipeline can run with the current settings.

    Returns:
        dict: Validation results
    """
    issues = list(settings.validate_settings())
    if workers is not None and int(workers) < 1:
        issues.append(f"workers must be at least 1, got {workers}")

    return {
        "is_valid": len(issues) == 0,
        "issues": issues,
        "workers": resolve_workers(workers if workers is None or int(workers) >= 1 else 1),
    }


__all__ = ["Task", "resolve_workers", "run_tasks", "get_pipeline_config", "validate_pipeline"]
