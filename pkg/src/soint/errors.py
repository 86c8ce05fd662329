"""Exception hierarchy shared by the library and mapped to CLI exit codes."""

from __future__ import annotations


class SOError(Exception):
    """Base class for library errors."""

    exit_code = 1


class DomainError(SOError, ValueError):
    """Input lies outside the domain of an operation."""

    exit_code = 2


class PrecisionError(SOError):
    """Working precision cannot certify a needed valuation.

    ``minimal_precision`` is the smallest N known to suffice, when it can be
    determined, and ``None`` otherwise.
    """

    exit_code = 3

    def __init__(self, message: str, minimal_precision: int | None = None):
        super().__init__(message)
        self.minimal_precision = minimal_precision


class BudgetError(SOError):
    """An enumeration would visit more nodes than the configured budget."""

    exit_code = 4


class UnsupportedError(DomainError):
    """The closed formulas do not cover this input without extra data."""


class VerificationMismatch(SOError):
    """An oracle value disagrees with a closed formula."""

    exit_code = 5
