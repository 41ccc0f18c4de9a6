"""Exact symbolic tools for holonomic systems of linear PDEs.

Polynomial and rational solution spaces, b-functions, and Ext dimension
tables, computed over Q with no floating point anywhere.
"""

from .errors import (
    HoloError,
    ParseError,
    NotHolonomicError,
    DegreeCapError,
    MissingPresentationError,
)

__all__ = [
    "HoloError",
    "ParseError",
    "NotHolonomicError",
    "DegreeCapError",
    "MissingPresentationError",
]

__version__ = "0.1.0"
