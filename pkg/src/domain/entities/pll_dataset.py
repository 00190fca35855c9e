"""
PLLDataset entity: features with candidate label sets and optional truth.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from ..exceptions import InvalidParameterException, MissingLabelsException, ShapeMismatchException


class PLLDataset:
    """
    Partial-label dataset D = {(x_i, s_i)} with optional hidden true labels.

    Arrays are copied on construction and marked read-only.

    Attributes:
        features: (n, d) float64 matrix.
        candidates: (n, k) boolean candidate indicators.
        true_labels: Optional (n,) int64 labels in [0, k).
        name: Free-form identifier (file stem, generator tag).
    """

    def __init__(
        self,
        features: np.ndarray,
        candidates: np.ndarray,
        true_labels: Optional[np.ndarray] = None,
        name: str = "dataset",
    ) -> None:
        """
        Initialize and validate a dataset.

        Args:
            features: Feature matrix, shape (n, d).
            candidates: Candidate indicator matrix, shape (n, k).
            true_labels: Optional true labels, shape (n,).
            name: Identifier used in logs and reports.

        Raises:
            ShapeMismatchException: If array shapes disagree.
            InvalidParameterException: If a candidate set is empty, a label is
                out of range, or a true label lies outside its candidate set.
        """
        features = np.array(features, dtype=np.float64)
        candidates = np.array(candidates, dtype=bool)
        if features.ndim != 2 or candidates.ndim != 2 or features.shape[0] != candidates.shape[0]:
            raise ShapeMismatchException("dataset", [features.shape, candidates.shape])
        if candidates.shape[1] < 1:
            raise InvalidParameterException("k", candidates.shape[1], "need at least one class")

        empty = np.flatnonzero(~candidates.any(axis=1))
        if empty.size:
            raise InvalidParameterException("candidates", int(empty[0]), "candidate set is empty")

        labels = None
        if true_labels is not None:
            labels = np.array(true_labels, dtype=np.int64)
            if labels.shape != (features.shape[0],):
                raise ShapeMismatchException("dataset", [features.shape, labels.shape])
            k = candidates.shape[1]
            bad = np.flatnonzero((labels < 0) | (labels >= k))
            if bad.size:
                raise InvalidParameterException("true_labels", int(labels[bad[0]]), f"must lie in [0, {k})")
            outside = np.flatnonzero(~candidates[np.arange(labels.size), labels])
            if outside.size:
                raise InvalidParameterException(
                    "true_labels", int(outside[0]), "true label is not in the candidate set"
                )
            labels.setflags(write=False)

        features.setflags(write=False)
        candidates.setflags(write=False)
        self.features = features
        self.candidates = candidates
        self.true_labels = labels
        self.name = name

    @property
    def n(self) -> int:
        return int(self.features.shape[0])

    @property
    def d(self) -> int:
        return int(self.features.shape[1])

    @property
    def k(self) -> int:
        return int(self.candidates.shape[1])

    @property
    def has_labels(self) -> bool:
        return self.true_labels is not None

    def require_labels(self, operation: str) -> np.ndarray:
        """Return the true labels or raise MissingLabelsException."""
        if self.true_labels is None:
            raise MissingLabelsException(operation)
        return self.true_labels

    def subset(self, indices: np.ndarray, name: Optional[str] = None) -> "PLLDataset":
        indices = np.asarray(indices, dtype=np.int64)
        return PLLDataset(
            self.features[indices],
            self.candidates[indices],
            None if self.true_labels is None else self.true_labels[indices],
            name=name or self.name,
        )

    def with_candidates(self, candidates: np.ndarray, name: Optional[str] = None) -> "PLLDataset":
        return PLLDataset(self.features, candidates, self.true_labels, name=name or self.name)

    def with_features(self, features: np.ndarray) -> "PLLDataset":
        return PLLDataset(features, self.candidates, self.true_labels, name=self.name)

    def summary(self) -> "DatasetSummary":
        sizes = self.candidates.sum(axis=1)
        return DatasetSummary(
            name=self.name,
            n=self.n,
            d=self.d,
            k=self.k,
            mean_candidates=float(sizes.mean()) if self.n else 0.0,
            singleton_share=float((sizes == 1).mean()) if self.n else 0.0,
            has_labels=self.has_labels,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PLLDataset):
            return NotImplemented
        if (self.true_labels is None) != (other.true_labels is None):
            return False
        return (
            np.array_equal(self.features, other.features)
            and np.array_equal(self.candidates, other.candidates)
            and (self.true_labels is None or np.array_equal(self.true_labels, other.true_labels))
        )

    def __hash__(self) -> int:
        return hash((self.name, self.features.shape, self.candidates.shape))

    def __repr__(self) -> str:
        return f"PLLDataset(name='{self.name}', n={self.n}, d={self.d}, k={self.k}, labels={self.has_labels})"


@dataclass(frozen=True)
class DatasetSummary:
    """Size statistics printed by the generate command."""

    name: str
    n: int
    d: int
    k: int
    mean_candidates: float
    singleton_share: float
    has_labels: bool

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "mean_candidates": round(self.mean_candidates, 6),
            "singleton_share": round(self.singleton_share, 6),
            "has_labels": self.has_labels,
        }
