"""Exception hierarchy shared by all modules.

Every exception carries a short ``category`` string so the command line can
report failures in a machine-readable way.
"""

from __future__ import annotations


class RladError(Exception):
    category = "error"


class DomainError(RladError, ValueError):
    """A parameter lies outside the domain an operation supports."""

    category = "domain"

    def __init__(self, message: str, parameter: str | None = None):
        super().__init__(message)
        self.parameter = parameter


class AccuracyError(RladError, ArithmeticError):
    """The requested tolerance cannot be certified at this input."""

    category = "accuracy"


class TruncationError(AccuracyError):
    category = "truncation"


class ResourceError(RladError, RuntimeError):
    """A configurable cap (event count, term count) was exceeded."""

    category = "resource"


class ConditioningError(AccuracyError):
    category = "conditioning"


class ConfigError(RladError, ValueError):
    category = "config"

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        super().__init__(message)
        self.field = field
        self.line = line
