"""Co-occurrence of incorrect candidates with each true label."""

from typing import Optional, Sequence

import numpy as np

from ..entities.pll_dataset import PLLDataset


def cooccurrence(ds: PLLDataset) -> np.ndarray:
    """
    Count matrix M with M[y, j] = #instances of true label y whose candidate
    set contains j. The diagonal holds the class counts.

    Raises:
        MissingLabelsException: If ds has no true labels.
    """
    labels = ds.require_labels("cooccurrence")
    onehot = np.eye(ds.k, dtype=np.int64)[labels]
    return onehot.T @ ds.candidates.astype(np.int64)


def normalize_rows(matrix: np.ndarray) -> np.ndarray:
    """Divide each row by its class count; empty classes give zero rows."""
    matrix = np.asarray(matrix, dtype=np.float64)
    counts = np.diag(matrix).copy()
    safe = np.where(counts > 0, counts, 1.0)
    return np.where(counts[:, None] > 0, matrix / safe[:, None], 0.0)


def off_diagonal(matrix: np.ndarray) -> np.ndarray:
    out = np.array(matrix, copy=True)
    np.fill_diagonal(out, 0)
    return out


def rank_profile(matrix: np.ndarray, permutation: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Column sums of the off-diagonal counts, ordered by long-tail rank.

    Without a permutation the columns are sorted by decreasing sum.
    """
    sums = off_diagonal(matrix).sum(axis=0)
    if permutation is None:
        return np.sort(sums)[::-1]
    return sums[np.argsort(np.asarray(permutation))]
