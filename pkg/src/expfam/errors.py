"""Exception hierarchy shared by every module in the package."""

from __future__ import annotations


class ExpFamError(Exception):
    """Base class for all package errors."""


class ConfigError(ExpFamError, ValueError):
    """Bad user-supplied configuration (unknown names, missing parameters)."""


class DomainError(ExpFamError, ValueError):
    """An argument lies outside the domain of a generator or kernel.

    ``index`` is set when the offending value came from a sample.
    """

    def __init__(self, message: str, index: int | None = None):
        if index is not None:
            message = f"{message} (at sample index {index})"
        super().__init__(message)
        self.index = index


class NumericRangeError(ExpFamError, ArithmeticError):
    """A non-finite intermediate (overflow, underflow to zero) was produced."""

    def __init__(self, message: str, index: int | None = None):
        if index is not None:
            message = f"{message} (at sample index {index})"
        super().__init__(message)
        self.index = index


class InverseError(ExpFamError, ArithmeticError):
    """T^{-1}(u) could not be computed (u outside range, bracket failure)."""


class EstimationError(ExpFamError, ArithmeticError):
    """Base for typed closed-form / numeric estimation failures."""

    reason = "estimation_failed"


class NegativeDiscriminant(EstimationError):
    reason = "negative_discriminant"

    def __init__(self, discriminant: float):
        super().__init__(f"quadratic discriminant is negative: {discriminant!r}")
        self.discriminant = discriminant


class NonpositiveRoot(EstimationError):
    reason = "nonpositive_root"

    def __init__(self, plus_root: float, minus_root: float | None = None):
        super().__init__(
            f"'+' root of the sigma quadratic is not positive: {plus_root!r} "
            f"(other root: {minus_root!r})"
        )
        self.plus_root = plus_root
        self.minus_root = minus_root


class ZeroQuadraticCoefficient(EstimationError):
    reason = "zero_quadratic_coefficient"


class DegenerateDenominator(EstimationError):
    reason = "degenerate_denominator"


class NoSignChange(EstimationError):
    reason = "no_sign_change"


class ConvergenceError(EstimationError):
    reason = "not_converged"
