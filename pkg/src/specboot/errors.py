"""Exception hierarchy shared by every module of the package."""


class SpecbootError(Exception):
    """Base class for all package errors."""


class DimensionError(SpecbootError, ValueError):
    """Raised when a dimension is too small for the request."""


class ConfigurationError(SpecbootError, ValueError):
    """Raised for invalid parameters or configuration."""


class DataError(SpecbootError, ValueError):
    """Raised when observed data contain non-finite values."""


class InsufficientDataError(SpecbootError, ValueError):
    """Raised when an estimator needs more observations than provided."""


class DegenerateInputError(SpecbootError, ArithmeticError):
    """Raised when an estimator denominator vanishes."""


class DomainError(SpecbootError, ValueError):
    """Raised when a function must be evaluated outside its domain."""


class SolverError(SpecbootError, RuntimeError):
    """Raised when the Stieltjes fixed point fails to converge.

    Attributes
    ----------
    residual : float
        Largest residual at the last iterate.
    z : complex or None
        Offending evaluation point, when known.
    """

    def __init__(self, message, residual=float("nan"), z=None):
        super().__init__(message)
        self.residual = residual
        self.z = z


class ReplicateError(SpecbootError, RuntimeError):
    """Raised when a bootstrap replicate fails; carries the replicate index."""

    def __init__(self, message, index):
        super().__init__(f"replicate {index}: {message}")
        self.index = index
