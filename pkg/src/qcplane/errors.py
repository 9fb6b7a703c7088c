"""Shared exception types."""


class QcplaneError(Exception):
    """Base class for package-specific errors."""


class DomainError(QcplaneError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(QcplaneError, ValueError):
    """A run configuration or truncation window is malformed."""


class EvaluationError(QcplaneError, ValueError):
    """A coefficient function cannot be evaluated where required."""


class SingularityError(QcplaneError, ArithmeticError):
    """A bounded-transform inversion was requested too close to its singularity."""
