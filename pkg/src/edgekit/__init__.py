"""Edge statistics of the Laguerre unitary ensemble: kernels, scalings, operators, sampling."""

from .errors import ConvergenceError, DomainError, EdgekitError, GridMismatchError, MissingInputError

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "EdgekitError",
    "GridMismatchError",
    "MissingInputError",
    "__version__",
]
