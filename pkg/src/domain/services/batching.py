"""Epoch-wise shuffled mini-batch indices."""

from typing import List

import numpy as np

from ..exceptions import InvalidParameterException


def shuffled_batches(n: int, batch_size: int, rng: np.random.Generator) -> List[np.ndarray]:
    """
    Split a fresh permutation of range(n) into mini-batches.

    The last partial batch is kept; a trailing batch of a single row is merged
    into its predecessor because batch normalization needs two rows.
    """
    if batch_size < 1:
        raise InvalidParameterException("batch_size", batch_size, "must be >= 1")
    order = rng.permutation(n)
    batches = [order[start:start + batch_size] for start in range(0, n, batch_size)]
    if len(batches) > 1 and batches[-1].size == 1:
        tail = batches.pop()
        batches[-1] = np.concatenate([batches[-1], tail])
    return batches
