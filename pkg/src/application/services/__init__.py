"""
Application services.

This module provides orchestration services for the application layer.
"""

from .dataset_service import DatasetService
from .experiment_service import ExperimentService, run_experiment, stratified_split
from .trainer import EpochMetrics, Trainer, TrainingResult, fit, restore_result, warmup

__all__ = [
    "DatasetService",
    "ExperimentService",
    "run_experiment",
    "stratified_split",
    "EpochMetrics",
    "Trainer",
    "TrainingResult",
    "fit",
    "restore_result",
    "warmup",
]
