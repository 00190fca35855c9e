"""
PL-kNN baseline: candidate voting among the nearest training instances.
"""

import logging
from typing import Optional

import numpy as np
from sklearn.neighbors import NearestNeighbors

from ..entities.pll_dataset import PLLDataset
from ..exceptions import InvalidParameterException, ShapeMismatchException

logger = logging.getLogger(__name__)


class PlKnn:
    """
    k-nearest-neighbour voting for partial labels.

    Each neighbour votes with its candidate indicator divided by the
    candidate-set size; votes are normalized to a distribution. Ties in the
    argmax resolve to the smallest class index.
    """

    def __init__(self, k_neighbors: int = 10) -> None:
        if k_neighbors < 1:
            raise InvalidParameterException("k_neighbors", k_neighbors, "must be >= 1")
        self.k_neighbors = k_neighbors
        self.knn: Optional[NearestNeighbors] = None
        self.votes: Optional[np.ndarray] = None

    def fit(self, train: PLLDataset) -> "PlKnn":
        if train.n == 0:
            raise InvalidParameterException("train", 0, "training set is empty")
        neighbors = min(self.k_neighbors, train.n)
        self.knn = NearestNeighbors(n_neighbors=neighbors)
        self.knn.fit(train.features)
        mask = train.candidates.astype(np.float64)
        self.votes = mask / mask.sum(axis=1, keepdims=True)
        logger.debug(f"PL-kNN fitted on {train.n} instances with {neighbors} neighbours")
        return self

    def predict_proba(self, x: np.ndarray) -> np.ndarray:
        if self.knn is None or self.votes is None:
            raise InvalidParameterException("model", None, "fit must be called before predict")
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        if x.shape[1] != self.knn.n_features_in_:
            raise ShapeMismatchException("plknn", [x.shape, (self.knn.n_features_in_,)])
        indices = self.knn.kneighbors(x, return_distance=False)
        tally = self.votes[indices].sum(axis=1)
        return tally / tally.sum(axis=1, keepdims=True)

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.predict_proba(x).argmax(axis=1)


def plknn(train: PLLDataset, test_x: np.ndarray, k_neighbors: int = 10) -> np.ndarray:
    """Normalized vote vectors for test_x, shape (n_test, k)."""
    return PlKnn(k_neighbors).fit(train).predict_proba(test_x)
