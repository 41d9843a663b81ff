"""Utility modules for the prefiltering simulator."""

from .storage_utils import OutputManager, format_real, parse_scalars
from .errors import (
    LarpError,
    ConfigError,
    DomainError,
    UndefinedRankError,
    EmptySampleError,
    IncompleteGridError,
    InfeasibleGameError,
    ScalarParseError,
)

__all__ = [
    "OutputManager",
    "format_real",
    "parse_scalars",
    "LarpError",
    "ConfigError",
    "DomainError",
    "UndefinedRankError",
    "EmptySampleError",
    "IncompleteGridError",
    "InfeasibleGameError",
    "ScalarParseError",
]
