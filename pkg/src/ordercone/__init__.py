"""Exact band and band-projection computations for polyhedral pre-Riesz spaces."""

from ordercone.errors import (
    DomainError,
    NotGenerating,
    NotPointed,
    NotPositive,
    OrderConeError,
    ParseError,
    TheoremViolation,
)
from ordercone.space import OrderedSpace, validate

__all__ = [
    "DomainError",
    "NotGenerating",
    "NotPointed",
    "NotPositive",
    "OrderConeError",
    "OrderedSpace",
    "ParseError",
    "TheoremViolation",
    "validate",
]

__version__ = "0.1.0"
