"""
Candidate-set generation from a labelled dataset.

Each incorrect label is added independently with probability xi(x, label):
the instance-dependent rate xi1 compares the probe classifier's score for the
label with the best competing score; the long-tail rate xi2 decays with the
label's rank under a class permutation. Both strategies keep the true label.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from ..autodiff import Adam
from ..entities.pll_dataset import PLLDataset
from ..exceptions import InvalidParameterException, ShapeMismatchException
from ..models.networks import ProbeClassifier
from .batching import shuffled_batches

logger = logging.getLogger(__name__)

STRATEGIES = ("instance_dependent", "longtail_mix")


def train_probe(
    ds: PLLDataset,
    rng: np.random.Generator,
    epochs: int = 50,
    hidden: int = 256,
    batch_size: int = 256,
    lr: float = 1e-3,
    batch_norm: bool = True,
) -> ProbeClassifier:
    """
    Fit a supervised softmax MLP on the true labels of the full dataset.

    Raises:
        MissingLabelsException: If the dataset has no true labels.
    """
    labels = ds.require_labels("train_probe")
    probe = ProbeClassifier(ds.d, ds.k, rng, hidden=hidden, batch_norm=batch_norm)
    optimizer = Adam(probe.named_parameters(), lr=lr)

    for epoch in range(epochs):
        losses = []
        for ids in shuffled_batches(ds.n, batch_size, rng):
            optimizer.zero_grad()
            loss = probe.cross_entropy(ds.features[ids], labels[ids])
            loss.backward()
            optimizer.step()
            losses.append(loss.item())
        logger.debug(f"Probe epoch {epoch + 1}/{epochs}: loss {np.mean(losses):.4f}")

    accuracy = float((probe.predict_proba(ds.features).argmax(axis=1) == labels).mean())
    logger.info(f"Probe classifier trained for {epochs} epochs, train accuracy {accuracy:.4f}")
    return probe


def random_permutation(k: int, rng: np.random.Generator) -> np.ndarray:
    """Class ranks pi(j) for the long-tail schedule."""
    return rng.permutation(k)


def longtail_rates(permutation: Sequence[int], tail_base: float = 0.025) -> np.ndarray:
    """xi2(label) = tail_base ** ((pi(label) + 1) / k), one value per class."""
    permutation = np.asarray(permutation, dtype=np.int64)
    k = permutation.size
    if sorted(permutation.tolist()) != list(range(k)):
        raise InvalidParameterException("permutation", permutation.tolist(), f"must permute 0..{k - 1}")
    if not 0.0 < tail_base < 1.0:
        raise InvalidParameterException("tail_base", tail_base, "must lie in (0, 1)")
    return tail_base ** ((permutation + 1.0) / k)


def instance_rates(probabilities: np.ndarray) -> np.ndarray:
    """
    xi1(x, label) = g_label(x) / max over other labels of g(x).

    Args:
        probabilities: (n, k) probe class probabilities.

    Returns:
        (n, k) rates, not yet clipped.
    """
    probs = np.asarray(probabilities, dtype=np.float64)
    k = probs.shape[1]
    if k < 2:
        raise ShapeMismatchException("instance_rates", [probs.shape])
    order = np.sort(probs, axis=1)
    top, runner_up = order[:, -1:], order[:, -2:-1]
    # Best competitor of each label: the top score, or the runner-up for the top label itself.
    competitor = np.where(probs >= top, runner_up, top)
    tiny = np.finfo(np.float64).tiny
    return probs / np.maximum(competitor, tiny)


def add_candidates(true_labels: np.ndarray, rates: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Add each incorrect label with probability clip(rate, 0, 1).

    Args:
        true_labels: (n,) labels, always kept.
        rates: (n, k) or (k,) addition probabilities.
        rng: Generator for the uniform draws.

    Returns:
        (n, k) boolean candidate matrix.
    """
    labels = np.asarray(true_labels, dtype=np.int64)
    n = labels.size
    rates = np.clip(np.asarray(rates, dtype=np.float64), 0.0, 1.0)
    rates = np.broadcast_to(rates, (n, rates.shape[-1]))
    draws = rng.uniform(0.0, 1.0, size=rates.shape)
    candidates = draws <= rates
    candidates[np.arange(n), labels] = True
    return candidates


def mixed_rates(
    strategy: str,
    probabilities: Optional[np.ndarray],
    mix_weights: Sequence[float] = (0.3, 0.7),
    tail_base: float = 0.025,
    permutation: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """Addition rates for a strategy: xi1 alone, or w1 * xi1 + w2 * xi2."""
    if strategy not in STRATEGIES:
        raise InvalidParameterException("strategy", strategy, f"expected one of {STRATEGIES}")
    if probabilities is None:
        raise InvalidParameterException("probabilities", None, "probe probabilities are required")
    xi1 = instance_rates(probabilities)
    if strategy == "instance_dependent":
        return xi1
    if permutation is None:
        raise InvalidParameterException("permutation", None, "longtail_mix needs a class permutation")
    w1, w2 = mix_weights
    if abs(w1 + w2 - 1.0) > 1e-9:
        raise InvalidParameterException("mix_weights", tuple(mix_weights), "must sum to 1")
    return w1 * xi1 + w2 * longtail_rates(permutation, tail_base)


def generate_candidates(
    ds: PLLDataset,
    probabilities: np.ndarray,
    rng: np.random.Generator,
    strategy: str = "longtail_mix",
    mix_weights: Sequence[float] = (0.3, 0.7),
    tail_base: float = 0.025,
    permutation: Optional[Sequence[int]] = None,
) -> PLLDataset:
    """
    Replace the candidate sets of a labelled dataset with generated ones.

    Args:
        ds: Dataset with true labels.
        probabilities: Probe class probabilities for ds.features.
        rng: Generator for the Bernoulli draws.
        strategy: "instance_dependent" or "longtail_mix".
        mix_weights: (w1, w2) for longtail_mix.
        tail_base: Base of the long-tail schedule.
        permutation: Class ranks for longtail_mix.

    Returns:
        New dataset with the same features and labels.

    Raises:
        MissingLabelsException: If ds has no true labels.
    """
    labels = ds.require_labels("generate_candidates")
    probabilities = np.asarray(probabilities, dtype=np.float64)
    if probabilities.shape != (ds.n, ds.k):
        raise ShapeMismatchException("generate_candidates", [probabilities.shape, (ds.n, ds.k)])
    rates = mixed_rates(strategy, probabilities, mix_weights, tail_base, permutation)
    candidates = add_candidates(labels, rates, rng)
    generated = ds.with_candidates(candidates, name=f"{ds.name}-{strategy}")
    logger.info(f"Generated {strategy} candidates: mean size {generated.summary().mean_candidates:.3f}")
    return generated
