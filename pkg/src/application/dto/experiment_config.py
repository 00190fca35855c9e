"""
ExperimentConfig DTO and the combined run configuration file.
"""

import json
from pathlib import Path
from typing import List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator

from ..exceptions import ConfigurationException
from .gen_spec import GenSpec
from .train_config import TrainConfig

METHODS = ("vipll", "vipll_ablation", "plknn")


class ExperimentConfig(BaseModel):
    """
    Evaluation protocol settings.

    Attributes:
        n_seeds: Number of repeated stratified splits.
        test_fraction: Held-out share of each split.
        k_neighbors: Neighbours of the PL-kNN baseline.
        methods: Methods to run on every split.
        significance_level: Level of the Welch test.
        max_workers: Concurrent seed runs.
    """

    n_seeds: int = Field(5, ge=1, description="Repeated splits")
    test_fraction: float = Field(0.2, gt=0.0, lt=1.0, description="Held-out share")
    k_neighbors: int = Field(10, ge=1, description="PL-kNN neighbours")
    methods: List[str] = Field(default_factory=lambda: ["vipll"], min_length=1, description="Methods to evaluate")
    significance_level: float = Field(0.05, gt=0.0, lt=1.0, description="Welch test level")
    max_workers: int = Field(1, ge=1, description="Concurrent seed runs")

    model_config = {"extra": "forbid"}

    @field_validator("methods")
    @classmethod
    def validate_methods(cls, v: List[str]) -> List[str]:
        """
        Strip and deduplicate method names, keeping their order.

        Unknown names are rejected later by the experiment service so the
        error lists the available methods.
        """
        seen: List[str] = []
        for name in (m.strip() for m in v):
            if not name:
                raise ValueError("method names cannot be empty")
            if name not in seen:
                seen.append(name)
        return seen


class RunConfig(BaseModel):
    """Contents of a ``--config`` JSON file."""

    train: TrainConfig = Field(default_factory=TrainConfig)
    generation: GenSpec = Field(default_factory=GenSpec)
    experiment: ExperimentConfig = Field(default_factory=ExperimentConfig)

    model_config = {"extra": "forbid"}

    @classmethod
    def load(cls, path: Optional[Union[str, Path]]) -> "RunConfig":
        """
        Read a config file; a missing path yields all defaults.

        Raises:
            ConfigurationException: If the file cannot be read or parsed.
        """
        if path is None:
            return cls()
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationException(str(path), str(e)) from e
        if not isinstance(raw, dict):
            raise ConfigurationException(str(path), "top level must be a JSON object")
        try:
            return cls.model_validate(raw)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first["loc"])
            raise ConfigurationException(field, first["msg"]) from e

    def with_seed(self, seed: Optional[int]) -> "RunConfig":
        """Override train.seed and generation.probe_seed."""
        if seed is None:
            return self
        try:
            train = TrainConfig.model_validate({**self.train.model_dump(), "seed": seed})
            generation = GenSpec.model_validate({**self.generation.model_dump(), "probe_seed": seed})
        except ValidationError as e:
            raise ConfigurationException("seed", e.errors()[0]["msg"]) from e
        return self.model_copy(update={"train": train, "generation": generation})
