"""Exception types shared across the package."""


class ErgodicPrimesError(Exception):
    """Base class for all package errors."""


class ParameterError(ErgodicPrimesError, ValueError):
    """An argument violates a documented precondition."""


class ResourceError(ErgodicPrimesError, MemoryError):
    """A request would exceed a configured size or memory budget."""


class InvalidClassError(ParameterError):
    """Residue class is not coprime to its modulus."""


class EmptyAverageError(ErgodicPrimesError, ZeroDivisionError):
    """The Chebyshev normaliser of an average vanishes."""


class KernelDomainError(ErgodicPrimesError, ValueError):
    """A singular kernel was evaluated at the origin."""


class PeriodTooSmallError(ErgodicPrimesError, ValueError):
    """Cyclic embedding wrapped the output of a multiplier operator."""


class QuadratureError(ErgodicPrimesError, ArithmeticError):
    """Adaptive quadrature did not reach its tolerance within budget."""

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
