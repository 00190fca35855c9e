"""
Parameter bundles for the variational distributions.

Both bundles wrap tape tensors so gradients flow from sampled values and
divergences back into the networks that produced the parameters.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..autodiff import Tensor, as_tensor
from ..exceptions import DomainViolationException, ShapeMismatchException


@dataclass(frozen=True)
class DirichletParams:
    """
    Concentration parameters of one or more Dirichlet distributions.

    Attributes:
        alpha: Tensor of shape (k,) or (n, k); every component > 0. Values
            produced by the classifier head are >= 1.
    """

    alpha: Tensor

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", as_tensor(self.alpha))
        if self.alpha.ndim == 0 or self.alpha.shape[-1] == 0:
            raise ShapeMismatchException("dirichlet", [self.alpha.shape])
        if not np.all(self.alpha.data > 0):
            raise DomainViolationException("dirichlet", "alpha must be strictly positive")

    @property
    def k(self) -> int:
        return int(self.alpha.shape[-1])

    @property
    def concentration(self) -> np.ndarray:
        """Total concentration alpha_0 per row."""
        return self.alpha.data.sum(axis=-1)

    @property
    def mean(self) -> np.ndarray:
        return self.alpha.data / self.alpha.data.sum(axis=-1, keepdims=True)

    @classmethod
    def of(cls, values: object) -> "DirichletParams":
        return cls(Tensor(np.asarray(values, dtype=np.float64)))


@dataclass(frozen=True)
class GaussianDiag:
    """
    Diagonal Gaussian N(mu, diag(exp(log_var))).

    Attributes:
        mu: Tensor of shape (m,) or (n, m).
        log_var: Tensor with the same shape as mu. Values are clamped to
            [-20, 20] wherever they are exponentiated.
    """

    mu: Tensor
    log_var: Tensor

    def __post_init__(self) -> None:
        object.__setattr__(self, "mu", as_tensor(self.mu))
        object.__setattr__(self, "log_var", as_tensor(self.log_var))
        if self.mu.shape != self.log_var.shape:
            raise ShapeMismatchException("gaussian", [self.mu.shape, self.log_var.shape])
        if np.any(np.isnan(self.log_var.data)):
            raise DomainViolationException("gaussian", "log_var contains NaN")

    @property
    def m(self) -> int:
        return int(self.mu.shape[-1])

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.mu.shape
