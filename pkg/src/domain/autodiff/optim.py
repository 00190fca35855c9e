"""
Adam optimizer with bias correction.

``adam_step`` is the functional update over named parameter arrays; ``Adam``
binds it to a set of named tensors and reads their accumulated ``.grad``.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Tuple

import numpy as np

from ..exceptions import (
    InvalidParameterException,
    NonFiniteGradientException,
    ShapeMismatchException,
)
from .tensor import Tensor

logger = logging.getLogger(__name__)


@dataclass
class AdamState:
    """
    Optimizer state shared across steps.

    Attributes:
        lr: Step size (> 0).
        beta1: First-moment decay.
        beta2: Second-moment decay.
        eps: Denominator guard.
        step: Number of completed updates.
        first_moment: Parameter name -> running mean of gradients.
        second_moment: Parameter name -> running mean of squared gradients.
    """

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    first_moment: Dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.lr <= 0:
            raise InvalidParameterException("lr", self.lr, "learning rate must be positive")
        for name, beta in (("beta1", self.beta1), ("beta2", self.beta2)):
            if not 0.0 <= beta < 1.0:
                raise InvalidParameterException(name, beta, "must lie in [0, 1)")


def adam_step(
    params: Mapping[str, np.ndarray],
    grads: Mapping[str, np.ndarray],
    state: AdamState,
) -> Mapping[str, np.ndarray]:
    """
    Apply one bias-corrected Adam update in place.

    Args:
        params: Parameter name -> array (modified in place).
        grads: Parameter name -> gradient; names missing here are not moved.
        state: Optimizer state, advanced by one step.

    Returns:
        The updated params mapping.

    Raises:
        NonFiniteGradientException: If any gradient contains NaN or inf.
        ShapeMismatchException: If a gradient does not match its parameter.
    """
    for name, grad in grads.items():
        if grad.shape != params[name].shape:
            raise ShapeMismatchException("adam_step", [params[name].shape, grad.shape])
        if not np.all(np.isfinite(grad)):
            raise NonFiniteGradientException(name)

    state.step += 1
    bias1 = 1.0 - state.beta1 ** state.step
    bias2 = 1.0 - state.beta2 ** state.step
    step_size = state.lr / bias1

    for name, grad in grads.items():
        param = params[name]
        if name not in state.first_moment:
            state.first_moment[name] = np.zeros_like(param)
            state.second_moment[name] = np.zeros_like(param)

        m = state.first_moment[name]
        v = state.second_moment[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * (grad * grad)

        param -= step_size * m / (np.sqrt(v / bias2) + state.eps)

    return params


class Adam:
    """Adam over a fixed set of named tensors."""

    def __init__(
        self,
        parameters: Iterable[Tuple[str, Tensor]],
        lr: float = 1e-3,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ) -> None:
        self.parameters: Dict[str, Tensor] = dict(parameters)
        self.state = AdamState(lr=lr, beta1=beta1, beta2=beta2, eps=eps)

    def step(self) -> None:
        """Update every parameter that received a gradient."""
        grads = {
            name: tensor.grad
            for name, tensor in self.parameters.items()
            if tensor.grad is not None
        }
        if not grads:
            logger.debug("Adam step skipped: no gradients")
            return
        adam_step({name: t.data for name, t in self.parameters.items()}, grads, self.state)

    def zero_grad(self) -> None:
        for tensor in self.parameters.values():
            tensor.grad = None
