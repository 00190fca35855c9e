"""
JSON checkpoint container for trained models.

The file holds the configuration echo, every weight array and batch-norm
buffer as nested lists, the decoder noise scale, the seed and the feature
standardization, so a model can be restored without the training data.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "pllvi-checkpoint"
CHECKPOINT_VERSION = 1

StateDict = Dict[str, np.ndarray]


class CheckpointError(Exception):
    """Raised when a checkpoint file cannot be read or has the wrong format."""

    pass


@dataclass
class ModelCheckpoint:
    """
    In-memory form of a checkpoint file.

    Attributes:
        d: Feature dimension.
        k: Number of classes.
        config: Echo of the training configuration.
        classifier: Classifier parameters and buffers.
        encoder: CVAE encoder parameters and buffers (empty for the ablation).
        decoder: CVAE decoder parameters and buffers (empty for the ablation).
        sigma: Decoder noise scale.
        seed: Master seed of the run.
        standardizer: Feature mean/scale lists.
        epoch: Epoch the checkpoint was taken after (0 = before the main loop).
    """

    d: int
    k: int
    config: Dict[str, Any]
    classifier: StateDict
    encoder: StateDict = field(default_factory=dict)
    decoder: StateDict = field(default_factory=dict)
    sigma: float = 1.0
    seed: int = 0
    standardizer: Optional[Dict[str, Any]] = None
    epoch: int = 0

    def to_json(self) -> Dict[str, Any]:
        def _lists(state: StateDict) -> Dict[str, Any]:
            return {name: np.asarray(value).tolist() for name, value in state.items()}

        return {
            "format": CHECKPOINT_FORMAT,
            "version": CHECKPOINT_VERSION,
            "d": self.d,
            "k": self.k,
            "epoch": self.epoch,
            "config": self.config,
            "classifier": _lists(self.classifier),
            "encoder": _lists(self.encoder),
            "decoder": _lists(self.decoder),
            "sigma": self.sigma,
            "seed": self.seed,
            "standardizer": self.standardizer,
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "ModelCheckpoint":
        if data.get("format") != CHECKPOINT_FORMAT:
            raise CheckpointError(f"not a checkpoint file (format={data.get('format')!r})")
        if data.get("version") != CHECKPOINT_VERSION:
            raise CheckpointError(f"unsupported checkpoint version {data.get('version')!r}")

        def _arrays(state: Dict[str, Any]) -> StateDict:
            return {name: np.asarray(value, dtype=np.float64) for name, value in state.items()}

        try:
            return cls(
                d=int(data["d"]),
                k=int(data["k"]),
                config=dict(data["config"]),
                classifier=_arrays(data["classifier"]),
                encoder=_arrays(data.get("encoder") or {}),
                decoder=_arrays(data.get("decoder") or {}),
                sigma=float(data["sigma"]),
                seed=int(data["seed"]),
                standardizer=data.get("standardizer"),
                epoch=int(data.get("epoch", 0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointError(f"incomplete checkpoint: {e}") from e


class CheckpointStore:
    """
    Reads and writes checkpoint files below a run directory.

    Periodic checkpoints are named ``checkpoint-epoch{N}.json``; the final
    model is ``model.json``.
    """

    def __init__(self, directory: Union[str, Path]) -> None:
        """
        Initialize the store.

        Args:
            directory: Directory for checkpoint files (created on first write).
        """
        self.directory = Path(directory)

    def epoch_path(self, epoch: int) -> Path:
        return self.directory / f"checkpoint-epoch{epoch}.json"

    @property
    def final_path(self) -> Path:
        return self.directory / "model.json"

    def save(self, checkpoint: ModelCheckpoint, path: Optional[Union[str, Path]] = None) -> Path:
        """
        Write a checkpoint.

        Args:
            checkpoint: Data to write.
            path: Target file; defaults to ``model.json`` in the directory.

        Returns:
            The written path.
        """
        target = Path(path) if path is not None else self.final_path
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8") as f:
            json.dump(checkpoint.to_json(), f)
        logger.debug(f"Checkpoint written: {target}")
        return target

    @staticmethod
    def load(path: Union[str, Path]) -> ModelCheckpoint:
        """
        Read a checkpoint file.

        Raises:
            CheckpointError: If the file is unreadable or not a checkpoint.
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise CheckpointError(f"cannot read {path}: {e}") from e
        if not isinstance(data, dict):
            raise CheckpointError(f"{path} does not hold a JSON object")
        logger.debug(f"Checkpoint loaded: {path}")
        return ModelCheckpoint.from_json(data)
