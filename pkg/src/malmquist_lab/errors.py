"""Exception types shared by the symbolic and numerical layers."""

from __future__ import annotations


class MalmquistError(Exception):
    """Base class for every error raised by the toolkit."""


class UndecidableError(MalmquistError):
    """A zero test came back Unknown where a decision was required.

    ``subject`` carries the offending subexpression (usually a ConstExpr)
    so that callers can report it.
    """

    def __init__(self, message: str, subject=None, bits: int | None = None):
        super().__init__(message)
        self.subject = subject
        self.bits = bits


class ConstZeroDivisionError(MalmquistError, ZeroDivisionError):
    """Division by a certified-zero constant or an identically zero function."""


class IntervalPrecisionError(MalmquistError):
    """Interval evaluation could not exclude a singularity at the given precision."""

    def __init__(self, message: str, bits: int):
        super().__init__(message)
        self.bits = bits


class ConvergenceError(MalmquistError):
    """Numerical quadrature or root polishing failed to converge."""

    def __init__(self, message: str, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)
