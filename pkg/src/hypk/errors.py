"""Exception hierarchy shared by every module."""


class HypkError(Exception):
    """Base class for all errors raised by hypk."""


class DomainError(HypkError, ValueError):
    """An argument lies outside the domain of the operation."""


class PointAtInfinity(DomainError):
    """The boundary angle pi/2 of the half-plane maps to the point at infinity."""


class ConvergenceError(HypkError, ArithmeticError):
    """A series failed to converge within its term budget.

    Attributes
    ----------
    partial_sum : float
        The last partial sum reached before giving up.
    terms : int
        Number of terms summed.
    """

    def __init__(self, message, partial_sum=float("nan"), terms=0):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.terms = terms


class StepRejected(HypkError):
    """An Euler step produced a non-positive vertical coordinate."""


class TruncationError(HypkError):
    """Simulated paths hit the step cap before reaching a boundary."""

    def __init__(self, message, truncated=0, total=0):
        super().__init__(message)
        self.truncated = truncated
        self.total = total
