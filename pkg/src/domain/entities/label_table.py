"""
LabelTable entity: the maintained per-instance label distributions.
"""

import numpy as np

from ..exceptions import InvalidParameterException, ShapeMismatchException


class LabelTable:
    """
    Per-instance label vectors supported on the candidate sets.

    Rows start uniform over each candidate set and are re-estimated from the
    classifier's Dirichlet parameters as training proceeds.

    Attributes:
        candidates: (n, k) boolean candidate indicators.
        rows: (n, k) float64 simplex rows, zero outside the candidate set.
    """

    def __init__(self, candidates: np.ndarray, rows: np.ndarray) -> None:
        candidates = np.asarray(candidates, dtype=bool)
        rows = np.array(rows, dtype=np.float64)
        if rows.shape != candidates.shape:
            raise ShapeMismatchException("label_table", [rows.shape, candidates.shape])
        self.candidates = candidates
        self.rows = rows

    @classmethod
    def uniform(cls, candidates: np.ndarray) -> "LabelTable":
        """Rows (1 / |s_i|) 1{j in s_i}."""
        mask = np.asarray(candidates, dtype=np.float64)
        return cls(candidates, mask / mask.sum(axis=1, keepdims=True))

    @property
    def n(self) -> int:
        return int(self.rows.shape[0])

    @property
    def k(self) -> int:
        return int(self.rows.shape[1])

    def take(self, ids: np.ndarray) -> np.ndarray:
        """Rows for the given instance ids (copy)."""
        ids = np.asarray(ids, dtype=np.int64)
        if ids.size and (ids.min() < 0 or ids.max() >= self.n):
            raise InvalidParameterException("ids", int(ids.max()), f"instance id outside [0, {self.n})")
        return self.rows[ids].copy()

    def dirichlet_lift(self, ids: np.ndarray, concentration: float) -> np.ndarray:
        """Dirichlet parameters 1 + c * row for the given ids."""
        if concentration <= 0:
            raise InvalidParameterException("concentration", concentration, "must be > 0")
        return 1.0 + concentration * self.take(ids)

    def is_consistent(self, atol: float = 1e-9) -> bool:
        """Rows sum to one and vanish off the candidate sets."""
        sums_ok = np.allclose(self.rows.sum(axis=1), 1.0, atol=atol, rtol=0.0)
        return bool(sums_ok and np.all(self.rows[~self.candidates] == 0.0))


def update_labels(table: LabelTable, ids: np.ndarray, alphas: np.ndarray) -> LabelTable:
    """
    Re-estimate rows as alpha renormalized over each candidate set.

    Args:
        table: Table updated in place.
        ids: Instance ids of the batch.
        alphas: (len(ids), k) Dirichlet parameters from the same forward pass.

    Returns:
        The same table, for chaining.
    """
    ids = np.asarray(ids, dtype=np.int64)
    alphas = np.asarray(alphas, dtype=np.float64)
    if alphas.shape != (ids.size, table.k):
        raise ShapeMismatchException("update_labels", [alphas.shape, (ids.size, table.k)])
    table.take(ids)
    masked = alphas * table.candidates[ids]
    table.rows[ids] = masked / masked.sum(axis=1, keepdims=True)
    return table
