"""
Report DTOs for evaluation runs.

This module defines the per-method aggregate over seeds and the experiment
report written to ``report.json``.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field, model_validator

from ...domain.services import mean_std

AGGREGATION_TOLERANCE = 1e-12


class RunReport(BaseModel):
    """
    Per-seed accuracies of one method and their aggregate.

    Attributes:
        method: Method name.
        dataset: Dataset identifier.
        seeds: Seed of every run, aligned with accuracies.
        accuracies: Held-out accuracy per seed.
        mean: Sample mean of accuracies.
        std: Sample standard deviation (ddof = 1).
        wall_seconds: Wall-clock time per run.
        config: Echo of the effective configuration.
        p_values: Welch p-values against other methods, keyed by method name.
        not_significantly_worse: Significance flag against the best method.
    """

    method: str = Field(..., description="Method name")
    dataset: str = Field(..., description="Dataset identifier")
    seeds: List[int] = Field(..., description="Seed per run")
    accuracies: List[float] = Field(..., min_length=1, description="Test accuracy per seed")
    mean: float = Field(..., ge=0.0, le=1.0, description="Mean accuracy")
    std: float = Field(..., ge=0.0, description="Standard deviation (ddof = 1)")
    wall_seconds: List[float] = Field(default_factory=list, description="Wall-clock seconds per run")
    config: Dict[str, Any] = Field(default_factory=dict, description="Configuration echo")
    p_values: Dict[str, float] = Field(default_factory=dict, description="Welch p-values against other methods")
    not_significantly_worse: Optional[bool] = Field(None, description="Flag against the best method")

    @model_validator(mode="after")
    def check_aggregates(self) -> "RunReport":
        mean, std = mean_std(self.accuracies)
        if abs(mean - self.mean) > AGGREGATION_TOLERANCE or abs(std - self.std) > AGGREGATION_TOLERANCE:
            raise ValueError("mean/std do not match the per-seed accuracies")
        if len(self.seeds) != len(self.accuracies):
            raise ValueError("one seed per accuracy is required")
        return self


class ExperimentReport(BaseModel):
    """
    Results of all methods on one dataset.

    Attributes:
        dataset: Dataset identifier.
        master_seed: Seed the per-run seeds were spawned from.
        significance_level: Level of the Welch test.
        significance_test: Description of the test used for the flags.
        runs: One RunReport per method.
        ablation_inferior: Whether the ablation's mean is below the full
            model's (set only when both ran).
    """

    dataset: str = Field(..., description="Dataset identifier")
    master_seed: int = Field(..., ge=0, description="Master seed")
    significance_level: float = Field(0.05, gt=0.0, lt=1.0, description="Welch test level")
    significance_test: str = Field(
        "two-sided unpaired Welch t-test",
        description="Test used for significance marking"
    )
    runs: List[RunReport] = Field(default_factory=list, description="Per-method reports")
    ablation_inferior: Optional[bool] = Field(None, description="Ablation mean below full model mean")

    def by_method(self) -> Dict[str, RunReport]:
        return {run.method: run for run in self.runs}
