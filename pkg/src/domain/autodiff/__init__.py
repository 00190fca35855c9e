"""Reverse-mode automatic differentiation on dense float64 tensors."""

from . import ops
from .gradcheck import GradCheckReport, grad_check
from .optim import Adam, AdamState, adam_step
from .tensor import GradientMap, GradTape, Tensor, as_tensor, backward, no_grad

__all__ = [
    "ops",
    "Tensor",
    "GradTape",
    "GradientMap",
    "as_tensor",
    "backward",
    "no_grad",
    "Adam",
    "AdamState",
    "adam_step",
    "grad_check",
    "GradCheckReport",
]
