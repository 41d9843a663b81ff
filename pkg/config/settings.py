"""
Configuration settings for the learner-agnostic prefiltering simulator.
Handles environment variables and the default experiment protocol.
"""

import logging
import os
from dotenv import load_dotenv

# Load environment variables from .env file
# Try env.local first (for local development), then fall back to .env
load_dotenv('env.local')
load_dotenv()  # Loads .env if it exists, but won't override existing variables

logger = logging.getLogger(__name__)


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, "")
    try:
        return int(raw) if raw.strip() else default
    except ValueError:
        logger.warning(f"Ignoring non-integer value for {name}: {raw!r}")
        return default


class Settings:
    """Configuration settings for the simulator."""

    # Artifact
    ARTIFACT_VERSION: str = "1.0.0"

    # Reproducibility and execution
    DEFAULT_SEED: int = _int_env("LARP_SEED", 20240607)
    WORKERS: int = _int_env("LARP_WORKERS", os.cpu_count() or 1)
    OUTPUT_DIR: str = os.getenv("LARP_OUTPUT_DIR", "./output")

    # Gaussian mean-estimation protocol
    DEFAULT_SAMPLE_SIZE: int = 10001
    DEFAULT_REPLICATIONS: int = 8
    DEFAULT_THETA: float = 0.0
    DEFAULT_SIGMA: float = 1.0
    NOISE_GRID_RANGE: tuple = (0.0, 10.0)
    NOISE_GRID_SIZE: int = 50
    PARAM_GRID_SIZE: int = 50
    QUANTILE_GRID_RANGE: tuple = (0.005, 0.495)  # equidistant
    SCALE_GRID_RANGE: tuple = (0.1, 10.0)  # log-spaced, z-score and SDO
    DEFAULT_EPSILONS: tuple = (0.0, 0.05, 0.1, 0.15, 0.2, 0.25)
    DEFAULT_DELTAS: tuple = (0.01, 1.0)
    DEFAULT_CONFIDENCE: float = 0.05  # delta_0

    # Heterogeneity sweep
    HETERO_EPSILON: float = 0.2
    HETERO_DELTA1: float = 0.01
    HETERO_DELTA2_GRID: tuple = (0.01, 0.25, 0.5, 1.0, 2.0)

    # Numerics
    BISECTION_TOLERANCE: float = 1e-12
    BISECTION_MAX_ITERATIONS: int = 200
    RISK_BOUND_SLACK: float = 10.0

    # Development Settings
    DEBUG: bool = os.getenv("DEBUG", "False").lower() == "true"
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO").upper()

    @classmethod
    def validate_settings(cls) -> list[str]:
        """Validate environment-derived settings and return the problems found."""
        problems = []

        if not 0 <= cls.DEFAULT_SEED < 2**64:
            problems.append(f"LARP_SEED must be an unsigned 64-bit integer, got {cls.DEFAULT_SEED}")
        if cls.WORKERS < 1:
            problems.append(f"LARP_WORKERS must be at least 1, got {cls.WORKERS}")
        if cls.LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"LOG_LEVEL {cls.LOG_LEVEL!r} is not a logging level")

        return problems


# Global settings instance
settings = Settings()

for _problem in settings.validate_settings():
    logger.warning(f"Settings problem: {_problem}")
