"""Exception types shared across the package.

Every error that can escape a public operation is a subclass of
EpsfacError, so the CLI can map failures onto stable exit codes.
"""

from __future__ import annotations


class EpsfacError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ParseError(EpsfacError):
    """Malformed series / rational-function / problem-file text."""

    exit_code = 2

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class SchemaError(EpsfacError):
    """Problem file violates the input schema."""

    exit_code = 2


class BaseMismatch(EpsfacError):
    """Operands live over different coefficient rings."""

    exit_code = 2


class NotAUnit(EpsfacError):
    """Inversion of an element whose reduction is zero."""

    exit_code = 3


class Indeterminate(EpsfacError):
    """Valuation of a series that vanishes to the available precision."""

    exit_code = 5


class InsufficientPrecision(EpsfacError):
    """A result would depend on coefficients beyond the tracked precision."""

    exit_code = 5


class DivisionByZeroPolynomial(EpsfacError):
    """Rational function with identically zero denominator."""

    exit_code = 2


class NonFreeQuotient(EpsfacError):
    """A finite quotient module failed to be free over the nilpotent base."""

    exit_code = 3


class NormalizationRequired(EpsfacError):
    """Residue exponent outside the canonical [0, 1) window."""

    exit_code = 3


class InvalidRamification(EpsfacError):
    """Ramified pushforward invoked with inconsistent ramification data."""

    exit_code = 2


class NonConvergent(EpsfacError):
    """Truncation escalation hit its cap without stabilizing."""

    exit_code = 5


class AdmissibilityViolation(EpsfacError):
    """The chosen 1-form degenerates outside the allowed divisor."""

    exit_code = 3


class ReductionMismatch(EpsfacError):
    """Family forms whose reductions modulo nilpotents differ."""

    exit_code = 3


class NonRationalPoint(EpsfacError):
    """Curve operation at a point that is not rational (or infinity)."""

    exit_code = 3


class CheckFailed(EpsfacError):
    """A verification predicate failed; carries both sides."""

    exit_code = 4

    def __init__(self, message: str, lhs=None, rhs=None):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs
