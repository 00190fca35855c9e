"""Entities for the domain layer."""

from .elbo_breakdown import ElboBreakdown
from .label_table import LabelTable, update_labels
from .pll_dataset import DatasetSummary, PLLDataset

__all__ = ["PLLDataset", "DatasetSummary", "LabelTable", "update_labels", "ElboBreakdown"]
