"""Domain layer for pllvi: tensors, distributions, models and objectives."""

from .exceptions import (
    DomainException,
    DomainViolationException,
    InfeasibleBoundsException,
    InvalidParameterException,
    MissingLabelsException,
    MissingSampleStateException,
    NonFiniteGradientException,
    NumericOverflowException,
    ShapeMismatchException,
)

__all__ = [
    "DomainException",
    "ShapeMismatchException",
    "DomainViolationException",
    "NumericOverflowException",
    "NonFiniteGradientException",
    "InvalidParameterException",
    "InfeasibleBoundsException",
    "MissingSampleStateException",
    "MissingLabelsException",
]
