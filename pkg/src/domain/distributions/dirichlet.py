"""
Dirichlet sampling, pathwise gradients and divergences.

Samples are normalized Gamma(alpha_j, 1) draws. numpy's ``standard_gamma``
implements the Marsaglia-Tsang squeeze method; the raw draws are kept on the
sample so the pathwise gradient can be formed by implicit differentiation of
the Gamma CDF, dg/dalpha = -(dF/dalpha) / (dF/dg).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special

from ..autodiff import Tensor, ops
from ..autodiff.tensor import record_op
from ..exceptions import MissingSampleStateException, ShapeMismatchException
from ..value_objects.distribution_params import DirichletParams

SIMPLEX_EPS = 1e-12
_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class DirichletSample:
    """
    Simplex draws with the Gamma variates they were built from.

    Attributes:
        values: Points on the simplex, shape (..., k).
        gamma_draws: Gamma(alpha, 1) variates, same shape; None if discarded.
        alpha: Concentrations broadcast to the sample shape.
    """

    values: np.ndarray
    gamma_draws: Optional[np.ndarray]
    alpha: np.ndarray


def sample_dirichlet(
    params: DirichletParams,
    rng: np.random.Generator,
    n_samples: Optional[int] = None,
) -> DirichletSample:
    """
    Draw from Dir(alpha).

    Args:
        params: Concentrations, shape (..., k).
        rng: Random generator.
        n_samples: Optional number of draws stacked on a new leading axis.

    Returns:
        DirichletSample whose values lie in [1e-12, 1 - 1e-12] and sum to 1.
    """
    alpha = params.alpha.data
    if n_samples is not None:
        alpha = np.broadcast_to(alpha, (n_samples,) + alpha.shape)
    alpha = np.ascontiguousarray(alpha)

    draws = np.maximum(rng.standard_gamma(alpha), _TINY)
    values = draws / draws.sum(axis=-1, keepdims=True)
    values = np.clip(values, SIMPLEX_EPS, 1.0 - SIMPLEX_EPS)
    values /= values.sum(axis=-1, keepdims=True)
    return DirichletSample(values=values, gamma_draws=draws, alpha=alpha)


def gamma_alpha_derivative(draws: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """
    dg/dalpha for g ~ Gamma(alpha, 1) at fixed CDF level.

    dF/dalpha is a central difference of the regularized lower incomplete
    gamma function with step 1e-4 * max(1, alpha), capped at alpha / 2.
    """
    h = np.minimum(1e-4 * np.maximum(1.0, alpha), 0.5 * alpha)
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        d_cdf = (special.gammainc(alpha + h, draws) - special.gammainc(alpha - h, draws)) / (2.0 * h)
        log_pdf = (alpha - 1.0) * np.log(draws) - draws - special.gammaln(alpha)
        derivative = -d_cdf / np.exp(log_pdf)
    return np.where(np.isfinite(derivative), derivative, 0.0)


def dirichlet_sample_grad(sample: DirichletSample, downstream_grad: np.ndarray) -> np.ndarray:
    """
    Vector-Jacobian product of a Dirichlet draw with respect to alpha.

    With y = g / G and G = sum(g), dL/dalpha_j = dg_j/dalpha_j * (u_j - u.y) / G
    for the downstream gradient u = dL/dy.

    Args:
        sample: Draw with retained Gamma variates.
        downstream_grad: dL/dy, same shape as sample.values.

    Returns:
        dL/dalpha, same shape as sample.values.

    Raises:
        MissingSampleStateException: If the Gamma draws were not retained.
    """
    if sample.gamma_draws is None:
        raise MissingSampleStateException("Gamma draws were not retained")
    u = np.asarray(downstream_grad, dtype=np.float64)
    if u.shape != sample.values.shape:
        raise ShapeMismatchException("dirichlet_sample_grad", [sample.values.shape, u.shape])

    draws = sample.gamma_draws
    total = draws.sum(axis=-1, keepdims=True)
    raw = draws / total
    centred = u - (u * raw).sum(axis=-1, keepdims=True)
    return gamma_alpha_derivative(draws, sample.alpha) * centred / total


def dirichlet_rsample(
    params: DirichletParams,
    rng: np.random.Generator,
    n_samples: Optional[int] = None,
) -> Tensor:
    """
    Draw from Dir(alpha) as a tape node whose backward uses implicit gradients.

    Args:
        params: Concentrations, shape (..., k), possibly requiring grad.
        rng: Random generator.
        n_samples: Optional number of draws stacked on a new leading axis.

    Returns:
        Tensor of simplex points.
    """
    sample = sample_dirichlet(params, rng, n_samples)
    alpha = params.alpha

    def _backward(g: np.ndarray):
        grad = dirichlet_sample_grad(sample, g)
        if n_samples is not None:
            grad = grad.sum(axis=0)
        return (grad,)

    return record_op("dirichlet_sample", sample.values, (alpha,), _backward)


def _check_same_k(op: str, q: DirichletParams, p: DirichletParams) -> None:
    if q.k != p.k:
        raise ShapeMismatchException(op, [q.alpha.shape, p.alpha.shape])


def kl_dirichlet(q: DirichletParams, p: DirichletParams) -> Tensor:
    """
    Closed-form KL(Dir(q) || Dir(p)) per row.

    Args:
        q: Concentrations (..., k); gradients flow through lgamma/digamma.
        p: Concentrations (k,) or broadcast-compatible with q.

    Returns:
        Tensor of KL values, one per row of q.
    """
    _check_same_k("kl_dirichlet", q, p)
    qa, pa = q.alpha, p.alpha
    q0 = ops.sum(qa, axis=-1)
    p0 = ops.sum(pa, axis=-1)
    digamma_gap = ops.digamma(qa) - ops.reshape(ops.digamma(q0), q0.shape + (1,))
    return (
        ops.lgamma(q0)
        - ops.sum(ops.lgamma(qa), axis=-1)
        - ops.lgamma(p0)
        + ops.sum(ops.lgamma(pa), axis=-1)
        + ops.sum((qa - pa) * digamma_gap, axis=-1)
    )


def dirichlet_log_prob(params: DirichletParams, y: np.ndarray) -> np.ndarray:
    """log Dir(y; alpha) per row (no tape)."""
    alpha = params.alpha.data
    y = np.clip(np.asarray(y, dtype=np.float64), SIMPLEX_EPS, 1.0)
    return (
        special.gammaln(alpha.sum(axis=-1))
        - special.gammaln(alpha).sum(axis=-1)
        + ((alpha - 1.0) * np.log(y)).sum(axis=-1)
    )


def expected_log_subset_mass(params: DirichletParams, mask: np.ndarray) -> Tensor:
    """
    E[log sum_{j in s} y_j] for y ~ Dir(alpha), i.e. psi(alpha_s) - psi(alpha_0).

    Args:
        params: Concentrations (..., k).
        mask: Subset indicators broadcast-compatible with alpha.

    Returns:
        Tensor with one value per row.
    """
    alpha = params.alpha
    mask = np.asarray(mask, dtype=np.float64)
    subset = ops.sum(alpha * mask, axis=-1)
    return ops.digamma(subset) - ops.digamma(ops.sum(alpha, axis=-1))
