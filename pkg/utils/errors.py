"""
Exception hierarchy for the prefiltering simulator.
The CLI maps these onto process exit codes.
"""

from typing import List, Optional


class LarpError(Exception):
    """Base class for all simulator errors."""


class ConfigError(LarpError):
    """Invalid configuration; carries one message per offending field."""

    def __init__(self, message: str, issues: Optional[List[str]] = None):
        self.issues = list(issues or [])
        if self.issues:
            message = f"{message}: " + "; ".join(self.issues)
        super().__init__(message)


class DomainError(LarpError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class UndefinedRankError(LarpError, ValueError):
    """Quantile outlyingness queried above the sample maximum."""


class EmptySampleError(LarpError):
    """A prefilter retained no points."""


class IncompleteGridError(LarpError):
    """A min-max reduction received a grid with missing (m, param) cells."""


class InfeasibleGameError(LarpError):
    """No budget-balanced scheme is guaranteed for the given game."""


class ScalarParseError(LarpError):
    """A line of a scalar input file could not be parsed."""

    def __init__(self, line_number: int, text: str):
        self.line_number = line_number
        self.text = text
        super().__init__(f"line {line_number}: cannot parse {text!r} as a decimal scalar")


__all__ = [
    "LarpError",
    "ConfigError",
    "DomainError",
    "UndefinedRankError",
    "EmptySampleError",
    "IncompleteGridError",
    "InfeasibleGameError",
    "ScalarParseError",
]
