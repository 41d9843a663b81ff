"""Pipeline module for the prefiltering simulator."""

from .runner import resolve_workers, run_tasks, get_pipeline_config, validate_pipeline

__all__ = ["resolve_workers", "run_tasks", "get_pipeline_config", "validate_pipeline"]
