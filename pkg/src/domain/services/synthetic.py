"""Isotropic Gaussian blobs with balanced labels and singleton candidates."""

import numpy as np

from ..entities.pll_dataset import PLLDataset
from ..exceptions import InvalidParameterException

DEFAULT_SEPARATION = 5.0


def cluster_means(k: int, d: int, separation: float, rng: np.random.Generator) -> np.ndarray:
    """
    Class means on a sphere of radius ``separation``.

    d = 2 places the means evenly on a circle; k <= d uses scaled basis
    vectors; otherwise directions are drawn uniformly on the sphere.
    """
    if d == 2:
        angles = 2.0 * np.pi * np.arange(k) / k
        directions = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    elif k <= d:
        directions = np.eye(d)[:k]
    else:
        raw = rng.standard_normal((k, d))
        directions = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    return separation * directions


def synth_blobs(
    n: int,
    k: int,
    d: int,
    rng: np.random.Generator,
    separation: float = DEFAULT_SEPARATION,
) -> PLLDataset:
    """
    Unit-variance Gaussian clusters around ``cluster_means``.

    Labels are balanced (class j gets n // k or n // k + 1 rows) and shuffled;
    candidate sets are the singletons {y_i}.

    Raises:
        InvalidParameterException: If k < 2, d < 2, n < 1 or separation < 0.
    """
    if k < 2:
        raise InvalidParameterException("k", k, "need at least two classes")
    if d < 2:
        raise InvalidParameterException("d", d, "need at least two features")
    if n < 1:
        raise InvalidParameterException("n", n, "need at least one instance")
    if separation < 0:
        raise InvalidParameterException("separation", separation, "must be >= 0")

    means = cluster_means(k, d, separation, rng)
    labels = rng.permutation(np.arange(n) % k)
    features = means[labels] + rng.standard_normal((n, d))
    return PLLDataset(features, np.eye(k, dtype=bool)[labels], labels, name=f"blobs-k{k}-d{d}")
