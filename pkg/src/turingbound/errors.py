"""Exception types shared across the package."""


class TuringBoundError(Exception):
    """Base class for errors raised by this package."""


class DomainError(TuringBoundError, ValueError):
    """An argument lies outside the supported domain of an operation."""


class ToleranceUnreachable(TuringBoundError, ArithmeticError):
    """The truncation budget cannot certify the requested tolerance."""


class OptimizationFailure(TuringBoundError, RuntimeError):
    """A coarse-grid minimum landed on the boundary of the search interval."""


class NoSignChange(TuringBoundError, ValueError):
    """A bracketing search was given endpoints without a sign change."""


class SerializationError(TuringBoundError, ValueError):
    """A report row could not be serialized."""
