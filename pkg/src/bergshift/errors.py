"""Exception types shared across the package."""


class BergshiftError(Exception):
    """Base class for all package errors."""


class DomainError(BergshiftError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at (or too close to) a pole."""


class RootOrderError(DomainError):
    """Raw Beta-formula root weights requested for order p < 2.

    The first root of an operator is the operator itself, so there is
    nothing to compute; callers should use the symbol shift directly.
    """


class PreconditionError(BergshiftError, ValueError):
    """Structural precondition violated (shapes, duplicates, ranges)."""


class TruncationError(BergshiftError, ValueError):
    """An operation would read weights beyond the materialized truncation."""


class QuadratureError(BergshiftError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance.

    Carries the achieved absolute error estimate in ``estimate``.
    """

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class CalibrationError(BergshiftError, ValueError):
    """Root calibration impossible (vanishing or non-finite raw weight)."""


class SamplingError(BergshiftError, ValueError):
    """No usable sample points (all collide with poles)."""


class SymbolParseError(BergshiftError, ValueError):
    """Unparsable symbol specification string."""
