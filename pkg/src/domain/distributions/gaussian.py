"""
Diagonal Gaussian utilities for the conditional VAE.

log_var is clamped to [LOG_VAR_MIN, LOG_VAR_MAX] wherever it is
exponentiated.
"""

from typing import Optional

import numpy as np

from ..autodiff import Tensor, as_tensor, ops
from ..value_objects.distribution_params import GaussianDiag

LOG_VAR_MIN = -20.0
LOG_VAR_MAX = 20.0
LOG_2PI = float(np.log(2.0 * np.pi))


def clamped_log_var(g: GaussianDiag) -> Tensor:
    return ops.clamp(g.log_var, LOG_VAR_MIN, LOG_VAR_MAX)


def sample_gaussian(
    g: GaussianDiag,
    rng: np.random.Generator,
    n_samples: Optional[int] = None,
    noise: Optional[np.ndarray] = None,
) -> Tensor:
    """
    Reparameterized draw z = mu + exp(log_var / 2) * eps.

    Args:
        g: Distribution parameters, shape (..., m).
        rng: Random generator for eps.
        n_samples: Optional number of draws stacked on a new leading axis.
        noise: Explicit eps (overrides rng), for common random numbers.

    Returns:
        Tensor of shape (..., m) or (n_samples, ..., m).
    """
    shape = g.shape if n_samples is None else (n_samples,) + g.shape
    eps = rng.standard_normal(shape) if noise is None else np.asarray(noise, dtype=np.float64)
    std = ops.exp(clamped_log_var(g) * 0.5)
    return g.mu + std * eps


def kl_gaussian_std(g: GaussianDiag) -> Tensor:
    """KL(N(mu, sigma^2) || N(0, I)) per row, summed over the last axis."""
    log_var = clamped_log_var(g)
    terms = ops.exp(log_var) + ops.square(g.mu) - 1.0 - log_var
    return ops.sum(terms, axis=-1) * 0.5


def gaussian_log_prob(x: Tensor, g: GaussianDiag) -> Tensor:
    """log N(x; mu, diag(exp(log_var))) summed over the last axis."""
    x = as_tensor(x)
    log_var = clamped_log_var(g)
    scaled = ops.square(x - g.mu) * ops.exp(-log_var)
    return ops.sum(scaled + log_var + LOG_2PI, axis=-1) * -0.5


def standard_normal_log_prob(z: Tensor) -> Tensor:
    """log N(z; 0, I) summed over the last axis."""
    z = as_tensor(z)
    return ops.sum(ops.square(z) + LOG_2PI, axis=-1) * -0.5
