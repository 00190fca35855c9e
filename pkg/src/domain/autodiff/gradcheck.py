"""
Finite-difference gradient checking.

Compares tape gradients against central differences, coordinate by
coordinate. Coordinates where the forward and backward one-sided
differences disagree sharply are treated as kinks and skipped.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from .tensor import Tensor, backward, no_grad

logger = logging.getLogger(__name__)

KINK_NOTE = "nondifferentiable sample skipped"


@dataclass
class GradCheckReport:
    """
    Outcome of a gradient check.

    Attributes:
        max_relative_error: Largest relative error over the checked coordinates.
        tolerance: Threshold used for ``passed``.
        passed: Whether max_relative_error <= tolerance.
        skipped: Flat indices treated as kinks.
        notes: Human-readable remarks (contains KINK_NOTE when anything was skipped).
    """

    max_relative_error: float
    tolerance: float
    passed: bool
    skipped: List[int] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)


def grad_check(
    function: Callable[[Tensor], Tensor],
    point: np.ndarray,
    h: float = 1e-5,
    tol: float = 1e-6,
    floor: float = 1e-2,
    kink_threshold: float = 1e-2,
) -> GradCheckReport:
    """
    Check the tape gradient of a scalar function at a point.

    Args:
        function: Maps a tensor shaped like ``point`` to a scalar tensor. It
            must be deterministic (fix any randomness inside it).
        point: Evaluation point.
        h: Finite-difference step.
        tol: Pass threshold on the relative error.
        floor: Lower bound on the relative-error denominator.
        kink_threshold: One-sided slope disagreement that marks a kink.

    Returns:
        GradCheckReport.
    """
    point = np.array(point, dtype=np.float64)
    x = Tensor(point, requires_grad=True, name="x")
    backward(function(x))
    analytic = np.zeros_like(point) if x.grad is None else x.grad.reshape(point.shape)

    def value_at(values: np.ndarray) -> float:
        with no_grad():
            return function(Tensor(values)).item()

    flat = point.reshape(-1)
    f0 = value_at(point)
    worst = 0.0
    skipped: List[int] = []
    for i in range(flat.size):
        plus, minus = flat.copy(), flat.copy()
        plus[i] += h
        minus[i] -= h
        f_plus = value_at(plus.reshape(point.shape))
        f_minus = value_at(minus.reshape(point.shape))

        forward_slope = (f_plus - f0) / h
        backward_slope = (f0 - f_minus) / h
        if abs(forward_slope - backward_slope) > kink_threshold * max(1.0, abs(forward_slope)):
            skipped.append(i)
            continue

        numeric = (f_plus - f_minus) / (2.0 * h)
        exact = analytic.reshape(-1)[i]
        error = abs(exact - numeric) / max(abs(exact), abs(numeric), floor)
        worst = max(worst, error)

    notes = []
    if skipped:
        notes.append(KINK_NOTE)
        logger.warning(f"grad_check skipped {len(skipped)} kink coordinate(s)")

    return GradCheckReport(
        max_relative_error=worst,
        tolerance=tol,
        passed=worst <= tol,
        skipped=skipped,
        notes=notes,
    )
