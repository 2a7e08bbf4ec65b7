class EdgekitError(Exception):
    """Base class for library errors."""


class DomainError(EdgekitError, ValueError):
    """Input outside the mathematical domain of an operation."""


class GridMismatchError(DomainError):
    """Discretized operators built on different quadrature grids."""


class ConvergenceError(EdgekitError, ArithmeticError):
    """A numerical scheme failed to reach its declared tolerance."""


class MissingInputError(EdgekitError):
    """A required input artifact was not supplied."""
