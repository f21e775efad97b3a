"""State transfer on a path with weighted end loops."""

from .errors import (
    DegenerateRecurrenceError,
    DomainError,
    InternalError,
    NumericalConsistencyError,
    SearchFailure,
)
from .model import PathSpec
from .spectrum import Spectrum, full_spectrum

__all__ = [
    "DegenerateRecurrenceError",
    "DomainError",
    "InternalError",
    "NumericalConsistencyError",
    "PathSpec",
    "SearchFailure",
    "Spectrum",
    "full_spectrum",
]
__version__ = "0.1.0"
