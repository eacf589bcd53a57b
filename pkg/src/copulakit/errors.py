"""Exception hierarchy shared by every copulakit module."""


class CopulaError(Exception):
    """Base class for all library errors."""


class DomainError(CopulaError, ValueError):
    """A parameter or argument lies outside its admissible domain."""


class UnsupportedOperationError(CopulaError, NotImplementedError):
    """The operation is not defined for this model (e.g. density of a singular copula)."""


class EstimationError(CopulaError):
    """A fitting procedure could not produce an estimate."""


class QuadratureError(CopulaError):
    """Numerical integration failed to reach the requested tolerance."""


class NumericalError(CopulaError, ArithmeticError):
    """A computation overflowed or produced a non-finite value where a finite one is required."""
