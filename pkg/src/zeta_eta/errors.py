"""Exception types shared across the package.

Every refusal the library makes is one of these, so callers (and the CLI
exit-code mapping) can distinguish bad input from numerical trouble.
"""

from __future__ import annotations


class ZetaEtaError(Exception):
    """Base class for all package errors."""


class ValidationError(ZetaEtaError):
    """Input rejected before any numerics ran."""


class NumericalError(ZetaEtaError):
    """Computation started but could not be completed to tolerance."""


# --- evaluation-time errors -------------------------------------------------

class PoleAtOne(ValidationError):
    """s is too close to the simple pole at s = 1."""


class NearSingularity(ValidationError):
    """s is too close to a zero or pole for the requested operation."""

    def __init__(self, message: str, where: complex | None = None):
        super().__init__(message)
        self.where = where


class OnSingularity(ValidationError):
    """Requested point sits exactly on a zero or pole."""


class BudgetExceeded(NumericalError):
    """Series or quadrature budget ran out before reaching tolerance."""


# --- zero-table errors ------------------------------------------------------

class ParseError(ValidationError):
    """A zero-table file line could not be parsed."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NotSorted(ParseError):
    """Ordinates in a zero-table file are not strictly increasing."""


class EmptyFile(ValidationError):
    """Zero-table file contained no records."""


class BeyondTable(ValidationError):
    """Query needs zeros above the table's maximum height."""


class OutOfStrip(ValidationError):
    """Hypothetical zero outside the critical strip, or bad ordinate."""


# --- kernel / special-function errors ---------------------------------------

class InvalidFamily(ValidationError):
    """Unknown kernel family or invalid kernel parameter."""


class OnNegativeRealAxisCut(ValidationError):
    """Argument sits on the branch cut (nonpositive real axis)."""


# --- approximation errors ----------------------------------------------------

class BeyondSieve(ValidationError):
    """von Mangoldt query above the configured sieve limit."""


class ZeroCoincidesWithS(ValidationError):
    """s equals a zero in the table; the local logarithm is undefined."""


class HypothesisViolated(ValidationError):
    """Stated hypothesis of the bound does not hold for these parameters."""
