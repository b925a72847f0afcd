"""Exception hierarchy shared by every module."""


class QuasiboundError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(QuasiboundError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(QuasiboundError, OverflowError):
    """Result would overflow (or lose all precision) in double precision."""


class SingularPointError(DomainError):
    """Evaluation requested at a singular point, e.g. system time tau = 0."""


class BranchError(DomainError):
    """Complex energy lies on a branch cut of the wavenumber."""


class RegimeError(DomainError):
    """Parameters outside the regime in which a formula is valid."""


class DegenerateMatchingError(QuasiboundError, ZeroDivisionError):
    """Ratio-form matching coefficient is singular; use the two-coefficient form."""


class ContractError(QuasiboundError, TypeError):
    """An object does not satisfy the structural contract an operation needs."""


class EvaluationError(QuasiboundError, ArithmeticError):
    """A function returned a non-finite value during a scan."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ConvergenceError(QuasiboundError, ArithmeticError):
    """Iterative procedure failed to converge.

    ``trace`` holds whatever diagnostic history the failing routine kept
    (iterates for root finders, the worst subinterval for quadrature).
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace
