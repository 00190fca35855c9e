"""
Partial-label objectives.

The beta-ELBO combines an importance-weighted CVAE estimate of log p(x | y),
the candidate-set likelihood p(s | y) = 2^{-(k-1)} sum_{j in s} y_j and the
Dirichlet KL to the prior. The ablated objective replaces the generative
term with a KL to the maintained label table.
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..autodiff import Tensor, as_tensor, ops
from ..distributions import (
    dirichlet_rsample,
    expected_log_subset_mass,
    gaussian_log_prob,
    kl_dirichlet,
    log_sum_exp,
    sample_gaussian,
    standard_normal_log_prob,
)
from ..entities.elbo_breakdown import ElboBreakdown
from ..entities.label_table import LabelTable
from ..exceptions import InvalidParameterException, ShapeMismatchException
from ..models.networks import ClassifierNet, CvaeNets, classifier_alpha, recon_loglik
from ..value_objects.distribution_params import DirichletParams

logger = logging.getLogger(__name__)

LOG2 = float(np.log(2.0))
MASS_FLOOR = 1e-12
CANDIDATE_ESTIMATORS = ("sampled", "closed_form")


class ObjectiveResult(NamedTuple):
    """Reported terms, the loss to minimize and the batch's alpha (detached)."""

    breakdown: ElboBreakdown
    loss: Tensor
    alpha: np.ndarray


@dataclass(frozen=True)
class MiniBatch:
    """Instance ids with their features and candidate indicators."""

    ids: np.ndarray
    features: np.ndarray
    candidates: np.ndarray

    @property
    def size(self) -> int:
        return int(self.ids.size)


def candidate_mass(s: np.ndarray, y: np.ndarray) -> np.ndarray:
    """p(s | y) = 2^{-(k-1)} sum_{j in s} y_j, per row."""
    s = np.asarray(s, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if s.shape[-1] != y.shape[-1]:
        raise ShapeMismatchException("candidate_mass", [s.shape, y.shape])
    k = y.shape[-1]
    return (s * y).sum(axis=-1) / 2.0 ** (k - 1)


def log_candidate_mass(s: np.ndarray, y: object) -> Tuple[Tensor, bool]:
    """
    log p(s | y) with the inner sum clamped at 1e-12.

    Returns:
        (per-row log mass, degenerate flag set when any inner sum hit the floor).
    """
    y = as_tensor(y)
    s = np.asarray(s, dtype=np.float64)
    if s.shape[-1] != y.shape[-1]:
        raise ShapeMismatchException("log_candidate_mass", [s.shape, y.shape])
    k = y.shape[-1]
    inner = ops.sum(y * s, axis=-1)
    degenerate = bool(np.any(inner.data < MASS_FLOOR))
    if degenerate:
        logger.warning("Candidate mass below floor (empty candidate set?); clamping to 1e-12")
    return ops.log(ops.clamp(inner, low=MASS_FLOOR)) - (k - 1) * LOG2, degenerate


def expected_log_candidate_mass(params: DirichletParams, s: np.ndarray) -> Tensor:
    """Closed form E[log p(s | y)] = psi(alpha_s) - psi(alpha_0) - (k - 1) log 2."""
    return expected_log_subset_mass(params, s) - (params.k - 1) * LOG2


def log_px_given_y(
    nets: CvaeNets,
    x: np.ndarray,
    y: object,
    b_prime: int,
    rng: np.random.Generator,
    noise: Optional[np.ndarray] = None,
) -> Tensor:
    """
    Importance-weighted estimate of log p(x | y) per row.

    log (1/b') sum_i p(x | y, z_i) p(z_i) / r(z_i | x, y) with z_i drawn from
    the encoder, aggregated with log-sum-exp.

    Args:
        nets: CVAE networks (sigma taken from nets.sigma).
        x: Features, shape (n, d).
        y: Label vectors, shape (n, k); gradients flow through y.
        b_prime: Number of importance samples, >= 1.
        rng: Generator for the latent draws.
        noise: Explicit standard-normal noise of shape (b', n, m).

    Returns:
        Tensor of shape (n,).
    """
    if b_prime < 1:
        raise InvalidParameterException("b_prime", b_prime, "must be >= 1")
    x = np.asarray(x, dtype=np.float64)
    y = as_tensor(y)
    n = x.shape[0]

    posterior = nets.encode(x, y)
    z = sample_gaussian(posterior, rng, n_samples=b_prime, noise=noise)
    z_flat = ops.reshape(z, (b_prime * n, nets.m))
    repeat = np.tile(np.arange(n), b_prime)
    mu_theta = nets.decode(ops.take_rows(y, repeat), z_flat)

    log_lik = recon_loglik(x[repeat], mu_theta, nets.sigma)
    log_prior = standard_normal_log_prob(z_flat)
    log_post = ops.reshape(gaussian_log_prob(z, posterior), (b_prime * n,))
    log_weights = ops.reshape(log_lik + log_prior - log_post, (b_prime, n))
    return log_sum_exp(log_weights, axis=0) - float(np.log(b_prime))


def _check_batch(batch: MiniBatch) -> None:
    if batch.size == 0:
        raise InvalidParameterException("batch", 0, "mini-batch must not be empty")


def _candidate_term(
    alpha: DirichletParams,
    s: np.ndarray,
    y_flat: Tensor,
    s_flat: np.ndarray,
    estimator: str,
) -> Tensor:
    if estimator == "sampled":
        log_mass, _ = log_candidate_mass(s_flat, y_flat)
        return ops.mean(log_mass)
    if estimator == "closed_form":
        return ops.mean(expected_log_candidate_mass(alpha, s))
    raise InvalidParameterException("candidate_estimator", estimator, f"expected one of {CANDIDATE_ESTIMATORS}")


def _draw_labels(
    classifier: ClassifierNet, batch: MiniBatch, b: int, rng: np.random.Generator
) -> Tuple[DirichletParams, Tensor, np.ndarray]:
    if b < 1:
        raise InvalidParameterException("b", b, "must be >= 1")
    alpha = classifier_alpha(classifier, batch.features, batch.candidates)
    y = dirichlet_rsample(alpha, rng, n_samples=b)
    y_flat = ops.reshape(y, (b * batch.size, alpha.k))
    repeat = np.tile(np.arange(batch.size), b)
    return alpha, y_flat, repeat


def beta_elbo_batch(
    classifier: ClassifierNet,
    nets: CvaeNets,
    prior_alpha: np.ndarray,
    batch: MiniBatch,
    b: int,
    b_prime: int,
    beta: float,
    rng: np.random.Generator,
    candidate_estimator: str = "sampled",
) -> ObjectiveResult:
    """
    Batch-averaged beta-ELBO.

    Draws b Dirichlet labels per instance from the classifier, averages the
    generative and candidate terms over them, and subtracts beta times the
    closed-form KL to the prior Dirichlet.

    Args:
        classifier: Amortized classifier.
        nets: CVAE networks.
        prior_alpha: Prior Dirichlet parameters, shape (k,).
        batch: Mini-batch.
        b: Dirichlet samples per instance.
        b_prime: Importance samples per Dirichlet sample.
        beta: KL weight in (0, 1].
        rng: Run generator.
        candidate_estimator: "sampled" or "closed_form".

    Returns:
        ObjectiveResult with the breakdown of floats and loss = -total.

    Raises:
        InvalidParameterException: On an empty batch or bad sample counts.
    """
    _check_batch(batch)
    alpha, y_flat, repeat = _draw_labels(classifier, batch, b, rng)

    generative = ops.mean(log_px_given_y(nets, batch.features[repeat], y_flat, b_prime, rng))
    candidate = _candidate_term(alpha, batch.candidates, y_flat, batch.candidates[repeat], candidate_estimator)
    kl = ops.mean(kl_dirichlet(alpha, DirichletParams.of(prior_alpha)))

    breakdown = ElboBreakdown(
        generative_term=generative.item(),
        candidate_term=candidate.item(),
        kl_term=kl.item(),
        beta=beta,
    )
    return ObjectiveResult(breakdown, kl * beta - generative - candidate, alpha.alpha.data.copy())


def ablation_loss(
    classifier: ClassifierNet,
    label_table: LabelTable,
    batch: MiniBatch,
    b: int,
    rng: np.random.Generator,
    concentration: float = 10.0,
    candidate_estimator: str = "sampled",
) -> ObjectiveResult:
    """
    Discriminative objective without the generative model.

    E_batch[KL(q(y | x, s) || Dir(1 + c * label_row)) - E_y[log p(s | y)]].

    Returns:
        ObjectiveResult whose breakdown has generative_term 0 and beta 1.

    Raises:
        InvalidParameterException: If a batch id is missing from the table.
    """
    _check_batch(batch)
    target = DirichletParams.of(label_table.dirichlet_lift(batch.ids, concentration))
    alpha, y_flat, repeat = _draw_labels(classifier, batch, b, rng)

    candidate = _candidate_term(alpha, batch.candidates, y_flat, batch.candidates[repeat], candidate_estimator)
    kl = ops.mean(kl_dirichlet(alpha, target))
    breakdown = ElboBreakdown(generative_term=0.0, candidate_term=candidate.item(), kl_term=kl.item(), beta=1.0)
    return ObjectiveResult(breakdown, kl - candidate, alpha.alpha.data.copy())
