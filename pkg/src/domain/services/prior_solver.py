"""
Maximum-entropy class prior under candidate-frequency box constraints.

Maximizing entropy over the simplex subject to lower <= pi <= upper has the
water-filling solution pi_j = clip(lam, lower_j, upper_j), with the level lam
fixed by sum(pi) = 1. The sum is monotone in lam, so bisection finds it.
"""

import logging
from typing import Dict, List

import numpy as np

from ..exceptions import InfeasibleBoundsException, InvalidParameterException
from ..value_objects.prior import PriorBounds, PriorVector

logger = logging.getLogger(__name__)

BISECTION_STEPS = 200
PI_FLOOR = 1e-6
_FEASIBILITY_SLACK = 1e-12


def solve_max_entropy(bounds: PriorBounds) -> np.ndarray:
    """
    Entropy-maximizing distribution within the box constraints.

    Args:
        bounds: Lower/upper class-frequency bounds.

    Returns:
        Simplex vector pi with lower <= pi <= upper.

    Raises:
        InfeasibleBoundsException: If sum(lower) > 1 or sum(upper) < 1.
    """
    lower, upper = bounds.lower, bounds.upper
    if lower.sum() > 1.0 + _FEASIBILITY_SLACK:
        raise InfeasibleBoundsException(f"sum of lower bounds is {lower.sum():.6g} > 1")
    if upper.sum() < 1.0 - _FEASIBILITY_SLACK:
        raise InfeasibleBoundsException(f"sum of upper bounds is {upper.sum():.6g} < 1")

    lo, hi = float(lower.min()), float(upper.max())
    for _ in range(BISECTION_STEPS):
        level = 0.5 * (lo + hi)
        if np.clip(level, lower, upper).sum() < 1.0:
            lo = level
        else:
            hi = level
        if hi - lo <= 0.0:
            break
    pi = np.clip(0.5 * (lo + hi), lower, upper)

    free = (pi > lower) & (pi < upper)
    residual = 1.0 - pi.sum()
    if free.any() and residual != 0.0:
        pi[free] += residual / free.sum()
    logger.debug(f"Water-filling level {0.5 * (lo + hi):.6g}, residual {residual:.3g}")
    return pi


def prior_dirichlet_params(pi: np.ndarray, delta: float) -> np.ndarray:
    """
    Lift a prior to Dirichlet parameters (pi_j / min pi)^delta.

    Args:
        pi: Strictly positive class prior.
        delta: Exponent in [0, 1]; 0 gives the uniform Dirichlet.

    Returns:
        Parameters, all >= 1.

    Raises:
        InvalidParameterException: If delta is outside [0, 1] or pi has a
            non-positive component.
    """
    pi = np.asarray(pi, dtype=np.float64)
    if not 0.0 <= delta <= 1.0:
        raise InvalidParameterException("delta", delta, "must lie in [0, 1]")
    if np.any(pi <= 0):
        raise InvalidParameterException("pi", pi.tolist(), "components must be strictly positive")
    return np.maximum((pi / pi.min()) ** delta, 1.0)


def build_prior(candidates: np.ndarray, delta: float) -> PriorVector:
    """
    Bounds from the candidate matrix, max-entropy solve, floored lift.

    Components below 1e-6 are floored (and renormalized) before the lift so
    classes never seen alone or at all keep finite parameters.
    """
    bounds = PriorBounds.from_candidates(candidates)
    pi = solve_max_entropy(bounds)
    floored = np.maximum(pi, PI_FLOOR)
    floored /= floored.sum()
    alpha_pi = prior_dirichlet_params(floored, delta)
    logger.info(f"Prior solved for k={bounds.k}: max pi {pi.max():.4f}, min pi {pi.min():.4g}")
    return PriorVector(pi=pi, alpha_pi=alpha_pi, delta=float(delta))


def binding_constraints(pi: np.ndarray, bounds: PriorBounds, atol: float = 1e-9) -> Dict[str, List[int]]:
    """Class indices whose prior sits on its lower or upper bound."""
    pi = np.asarray(pi, dtype=np.float64)
    return {
        "lower": np.flatnonzero(np.abs(pi - bounds.lower) <= atol).tolist(),
        "upper": np.flatnonzero(np.abs(pi - bounds.upper) <= atol).tolist(),
    }
