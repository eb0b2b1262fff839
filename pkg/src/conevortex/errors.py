"""Typed error signals shared across the package.

Numerical failures and degenerate inputs are reported as exceptions
carrying enough state for a caller to mask or retry, never as clamped
or fabricated values.
"""

from __future__ import annotations


class ConeVortexError(Exception):
    """Base class for all package-specific signals."""


class DomainError(ConeVortexError, ValueError):
    """Input outside the mathematical domain of an operation."""


class RangeError(ConeVortexError, ValueError):
    """Input inside the domain but outside the supported numerical range
    (overflow/underflow of a special function, parameter box exceeded)."""


class DegenerateGeometryError(ConeVortexError, ValueError):
    """Deficit parameter exactly on a band edge, or a direction exactly on
    a shadow/double-image boundary; the asymptotic classification is
    undefined there."""


class PoleError(ConeVortexError, ArithmeticError):
    """Amplitude evaluated at (or numerically on top of) a singular
    direction.  Carries the offending direction so callers can mask it."""

    def __init__(self, message: str, direction: float | None = None):
        super().__init__(message)
        self.direction = direction


class NonConvergenceError(ConeVortexError, RuntimeError):
    """An iterative procedure exhausted its budget.  Subclasses carry
    diagnostics (residual history, tail magnitudes, ...)."""


class ProfileConvergenceError(NonConvergenceError):
    """Vortex profile Newton iteration failed; carries the residual history."""

    def __init__(self, message: str, residual_history: list[float]):
        super().__init__(message)
        self.residual_history = residual_history


class TruncationError(NonConvergenceError):
    """Partial-wave sum hit the mode cap before the tail criterion."""

    def __init__(self, message: str, last_term: float):
        super().__init__(message)
        self.last_term = last_term


class ExtrapolationError(NonConvergenceError):
    """Regularized-series extrapolation did not settle; carries the tail of
    the extrapolation diagonal."""

    def __init__(self, message: str, diagonal_tail: list[complex]):
        super().__init__(message)
        self.diagonal_tail = diagonal_tail


class QuadratureError(NonConvergenceError):
    """Grid too coarse for the requested quadrature accuracy."""

    def __init__(self, message: str, error_estimate: float):
        super().__init__(message)
        self.error_estimate = error_estimate


class ResonanceError(ConeVortexError, ArithmeticError):
    """Vanishing denominator Wronskian for a partial-wave mode."""

    def __init__(self, message: str, mode: int):
        super().__init__(message)
        self.mode = mode


class DivergentTotalCrossSection(ConeVortexError, ArithmeticError):
    """Total cross section does not exist (zero-radius core: the amplitude
    poles are non-integrable)."""


class ConfigError(ConeVortexError, ValueError):
    """CLI/run configuration rejected (schema or physical-range violation)."""

    def __init__(self, message: str, key: str | None = None):
        super().__init__(message)
        self.key = key
