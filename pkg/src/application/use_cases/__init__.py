"""
Application use cases.

This module provides use case implementations following
the Clean Architecture pattern.
"""

from .cooccurrence_use_case import CooccurrenceUseCase
from .evaluate_use_case import EvaluateUseCase
from .generate_data_use_case import GenerateDataUseCase
from .solve_prior_use_case import SolvePriorUseCase
from .train_model_use_case import TrainModelUseCase

__all__ = [
    "GenerateDataUseCase",
    "SolvePriorUseCase",
    "TrainModelUseCase",
    "EvaluateUseCase",
    "CooccurrenceUseCase",
]
