"""
Application Data Transfer Objects (DTOs).

This module provides the validated configuration and report objects passed
between the presentation and application layers.
"""

from .experiment_config import METHODS, ExperimentConfig, RunConfig
from .gen_spec import GenSpec
from .run_report import ExperimentReport, RunReport
from .train_config import TrainConfig

__all__ = [
    "TrainConfig",
    "GenSpec",
    "ExperimentConfig",
    "RunConfig",
    "METHODS",
    "RunReport",
    "ExperimentReport",
]
