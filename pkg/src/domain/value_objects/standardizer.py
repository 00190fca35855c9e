"""Feature z-scoring with statistics from a training split."""

from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from ..exceptions import ShapeMismatchException


@dataclass(frozen=True)
class Standardizer:
    """
    Affine map x -> (x - mean) / scale.

    Attributes:
        mean: Per-feature mean.
        scale: Per-feature standard deviation; constant features use 1.
    """

    mean: np.ndarray
    scale: np.ndarray

    @classmethod
    def fit(cls, features: np.ndarray) -> "Standardizer":
        features = np.asarray(features, dtype=np.float64)
        scale = features.std(axis=0)
        return cls(mean=features.mean(axis=0), scale=np.where(scale > 0, scale, 1.0))

    @classmethod
    def identity(cls, d: int) -> "Standardizer":
        return cls(mean=np.zeros(d), scale=np.ones(d))

    def apply(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features, dtype=np.float64)
        if features.shape[-1] != self.mean.size:
            raise ShapeMismatchException("standardize", [features.shape, self.mean.shape])
        return (features - self.mean) / self.scale

    def to_dict(self) -> Dict[str, List[float]]:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, data: Dict[str, List[float]]) -> "Standardizer":
        return cls(mean=np.asarray(data["mean"], dtype=np.float64), scale=np.asarray(data["scale"], dtype=np.float64))
