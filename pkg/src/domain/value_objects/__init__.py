"""Value objects for the domain layer."""

from .distribution_params import DirichletParams, GaussianDiag
from .prior import PriorBounds, PriorVector
from .standardizer import Standardizer

__all__ = ["DirichletParams", "GaussianDiag", "PriorBounds", "PriorVector", "Standardizer"]
