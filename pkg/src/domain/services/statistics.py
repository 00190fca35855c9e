"""
Accuracy, aggregation and significance testing of per-seed results.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np
from scipy import stats

from ..exceptions import InvalidParameterException, ShapeMismatchException

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WelchResult:
    """Two-sided Welch t-test outcome."""

    t: float
    dof: float
    p: float


def accuracy(predictions: np.ndarray, truth: np.ndarray) -> float:
    """Fraction of exact matches."""
    predictions = np.asarray(predictions)
    truth = np.asarray(truth)
    if predictions.shape != truth.shape:
        raise ShapeMismatchException("accuracy", [predictions.shape, truth.shape])
    if predictions.size == 0:
        raise InvalidParameterException("predictions", 0, "need at least one prediction")
    return float((predictions == truth).mean())


def mean_std(values: Sequence[float]) -> Tuple[float, float]:
    """Sample mean and standard deviation (ddof = 1; 0 for a single value)."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise InvalidParameterException("values", 0, "need at least one value")
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return float(arr.mean()), std


def welch_ttest(sample_a: Sequence[float], sample_b: Sequence[float]) -> WelchResult:
    """
    Welch's unequal-variance two-sided t-test.

    When both samples have zero variance the statistic is undefined: equal
    means give p = 1 and unequal means give p = 0 (t = +-inf).

    Raises:
        InvalidParameterException: If a sample has fewer than two values.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    for name, sample in (("sample_a", a), ("sample_b", b)):
        if sample.size < 2:
            raise InvalidParameterException(name, sample.size, "Welch test needs at least two values")

    if a.var(ddof=1) == 0.0 and b.var(ddof=1) == 0.0:
        dof = float(a.size + b.size - 2)
        gap = a.mean() - b.mean()
        if gap == 0.0:
            return WelchResult(t=0.0, dof=dof, p=1.0)
        return WelchResult(t=float(np.copysign(np.inf, gap)), dof=dof, p=0.0)

    var_a, var_b = a.var(ddof=1) / a.size, b.var(ddof=1) / b.size
    t = float((a.mean() - b.mean()) / np.sqrt(var_a + var_b))
    dof = float((var_a + var_b) ** 2 / (var_a**2 / (a.size - 1) + var_b**2 / (b.size - 1)))
    return WelchResult(t=t, dof=dof, p=float(2.0 * stats.t.sf(abs(t), dof)))


def not_significantly_worse(results: Dict[str, Sequence[float]], level: float = 0.05) -> Dict[str, bool]:
    """
    Flag methods that are the best or not significantly worse than it.

    A method is flagged when its mean is at least the best mean or the Welch
    p-value against the best method is >= level. Methods with a single
    result are only flagged if they are the best.
    """
    if not results:
        return {}
    means = {name: float(np.mean(values)) for name, values in results.items()}
    best = max(means, key=lambda name: means[name])
    flags: Dict[str, bool] = {}
    for name, values in results.items():
        if name == best or means[name] >= means[best]:
            flags[name] = True
        elif len(values) < 2 or len(results[best]) < 2:
            flags[name] = False
        else:
            flags[name] = welch_ttest(values, results[best]).p >= level
    logger.debug(f"Best method {best}; flags {flags}")
    return flags
