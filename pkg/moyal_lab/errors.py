"""
Exception hierarchy shared by every module.

The CLI maps AccuracyError to exit code 2 and DomainError to exit code 3.
"""

from __future__ import annotations


class LabError(Exception):
    """Base class for all moyal-lab failures."""

    exit_code: int = 1


class AccuracyError(LabError):
    """A numerical estimate exceeded its tolerance."""

    exit_code = 2

    def __init__(self, message: str, *, estimate: float | None = None, tolerance: float | None = None):
        if estimate is not None and tolerance is not None:
            message = f"{message} (estimate {estimate:.3e} > tolerance {tolerance:.3e})"
        super().__init__(message)
        self.estimate = estimate
        self.tolerance = tolerance


class AssemblyError(AccuracyError):
    """Effective-action assembly failed for one or more operator sectors."""

    def __init__(self, message: str, *, tags: list[str]):
        super().__init__(f"{message}: {', '.join(tags)}")
        self.tags = tags


class DomainError(LabError):
    """An input violates a precondition of the requested operation."""

    exit_code = 3


class UnsupportedConfigurationError(DomainError):
    """The operation is only defined for a narrower parameter set."""


class DimensionError(DomainError):
    """Operands disagree on params, truncation or shape."""


class UsageError(DomainError):
    """The command line is malformed; carries the usage text of the parser that failed."""

    def __init__(self, message: str, *, usage: str = ""):
        super().__init__(message)
        self.usage = usage
