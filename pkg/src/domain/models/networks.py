"""
The three networks of the model: the amortized Dirichlet classifier, the
CVAE encoder/decoder pair with its noise scale, and the supervised probe
classifier used for candidate generation.
"""

import logging
from typing import Iterator, Optional, Tuple

import numpy as np

from ..autodiff import Tensor, as_tensor, no_grad, ops
from ..distributions.gaussian import LOG_2PI, sample_gaussian
from ..exceptions import InvalidParameterException, ShapeMismatchException
from ..value_objects.distribution_params import DirichletParams, GaussianDiag
from .layers import MLP, Module

logger = logging.getLogger(__name__)


def _as_rows(op: str, values: object, width: int) -> Tensor:
    tensor = as_tensor(values)
    if tensor.ndim == 1:
        tensor = ops.reshape(tensor, (1, tensor.shape[0]))
    if tensor.ndim != 2 or tensor.shape[1] != width:
        raise ShapeMismatchException(op, [tensor.shape, (width,)])
    return tensor


class ClassifierNet(Module):
    """
    Amortized classifier f_phi(x, s) with a softplus head.

    The candidate set enters as a k-dim {0, 1} indicator concatenated to x.

    Args:
        d: Feature dimension.
        k: Number of classes.
        rng: Generator for weight initialization.
        hidden: Hidden layer width.
        batch_norm: Use batch normalization after hidden layers.
    """

    def __init__(self, d: int, k: int, rng: np.random.Generator, hidden: int = 256, batch_norm: bool = True) -> None:
        super().__init__()
        self.d = d
        self.k = k
        self.mlp = MLP([d + k, hidden, hidden, k], rng, batch_norm=batch_norm)

    def children(self) -> Iterator[Tuple[str, Module]]:
        yield "mlp", self.mlp

    def __call__(self, x: object, s: object) -> Tensor:
        x = _as_rows("classifier", x, self.d)
        s = _as_rows("classifier", np.asarray(s, dtype=np.float64), self.k)
        if x.shape[0] != s.shape[0]:
            raise ShapeMismatchException("classifier", [x.shape, s.shape])
        return ops.softplus(self.mlp(ops.concat([x, s], axis=1)))


def classifier_alpha(net: ClassifierNet, x: object, s: object) -> DirichletParams:
    """
    Dirichlet parameters alpha = softplus(MLP(x, s)) + 1.

    Args:
        net: Classifier network.
        x: Features, shape (d,) or (n, d).
        s: Candidate indicators, shape (k,) or (n, k).

    Returns:
        DirichletParams with every component >= 1, shape (n, k).

    Raises:
        ShapeMismatchException: If x or s does not match the network dimensions.
    """
    return DirichletParams(net(x, s) + 1.0)


def predict(net: ClassifierNet, x: object) -> np.ndarray:
    """
    Class probabilities g(x) = alpha / sum(alpha) with the full label set.

    Runs in inference mode without recording a tape; the network's previous
    mode is restored afterwards.
    """
    x = _as_rows("predict", x, net.d)
    was_training = net.training
    net.eval()
    try:
        with no_grad():
            alpha = classifier_alpha(net, x, np.ones((x.shape[0], net.k))).alpha.data
    finally:
        net.train(was_training)
    return alpha / alpha.sum(axis=1, keepdims=True)


class CvaeNets(Module):
    """
    Conditional VAE: encoder r_gamma(z | x, y) and decoder mu_theta(y, z).

    Attributes:
        encoder: MLP d + k -> hidden -> 2m, split into (mu, log_var).
        decoder: MLP k + m -> hidden -> d.
        sigma: Decoder noise scale, > 0.
        sigma_ema_decay: EMA decay for sigma updates, in (0, 1).
        sigma_floor: Lower bound applied to each RMSE observation.
    """

    def __init__(
        self,
        d: int,
        k: int,
        rng: np.random.Generator,
        m: int = 32,
        hidden: int = 256,
        batch_norm: bool = True,
        sigma_init: float = 1.0,
        sigma_ema_decay: float = 0.99,
        sigma_floor: float = 1e-2,
    ) -> None:
        super().__init__()
        if sigma_init <= 0:
            raise InvalidParameterException("sigma_init", sigma_init, "must be > 0")
        if not 0.0 < sigma_ema_decay < 1.0:
            raise InvalidParameterException("sigma_ema_decay", sigma_ema_decay, "must lie in (0, 1)")
        self.d = d
        self.k = k
        self.m = m
        self.encoder = MLP([d + k, hidden, 2 * m], rng, batch_norm=batch_norm)
        self.decoder = MLP([k + m, hidden, d], rng, batch_norm=batch_norm)
        self.sigma = float(sigma_init)
        self.sigma_ema_decay = float(sigma_ema_decay)
        self.sigma_floor = float(sigma_floor)

    def children(self) -> Iterator[Tuple[str, Module]]:
        yield "encoder", self.encoder
        yield "decoder", self.decoder

    def encode(self, x: object, y: object) -> GaussianDiag:
        x = _as_rows("encoder", x, self.d)
        y = _as_rows("encoder", y, self.k)
        if x.shape[0] != y.shape[0]:
            raise ShapeMismatchException("encoder", [x.shape, y.shape])
        out = self.encoder(ops.concat([x, y], axis=1))
        return GaussianDiag(mu=out[:, : self.m], log_var=out[:, self.m :])

    def decode(self, y: object, z: object) -> Tensor:
        y = _as_rows("decoder", y, self.k)
        z = _as_rows("decoder", z, self.m)
        if y.shape[0] != z.shape[0]:
            raise ShapeMismatchException("decoder", [y.shape, z.shape])
        return self.decoder(ops.concat([y, z], axis=1))


def cvae_forward(
    nets: CvaeNets,
    x: object,
    y: object,
    rng: np.random.Generator,
    noise: Optional[np.ndarray] = None,
) -> Tuple[GaussianDiag, Tensor, Tensor]:
    """
    Encode (x, y), draw one z and decode (y, z).

    Args:
        nets: CVAE networks.
        x: Features, shape (n, d).
        y: Label vectors on the simplex, shape (n, k); may carry a tape.
        rng: Generator for the Gaussian noise.
        noise: Explicit standard-normal noise of shape (n, m).

    Returns:
        (posterior, z, reconstruction mean of shape (n, d)).
    """
    posterior = nets.encode(x, y)
    z = sample_gaussian(posterior, rng, noise=noise)
    return posterior, z, nets.decode(y, z)


def recon_loglik(x: object, mu_theta: Tensor, sigma: float, dims: Optional[int] = None) -> Tensor:
    """
    Gaussian reconstruction log-likelihood per row.

    -||x - mu||^2 / (2 sigma^2) - (dims / 2) log(2 pi sigma^2), where dims
    defaults to the feature dimension of x.

    Raises:
        InvalidParameterException: If sigma <= 0.
        ShapeMismatchException: If x and mu_theta differ in shape.
    """
    if not sigma > 0:
        raise InvalidParameterException("sigma", sigma, "must be > 0")
    x = as_tensor(x)
    mu_theta = as_tensor(mu_theta)
    if x.shape != mu_theta.shape:
        raise ShapeMismatchException("recon_loglik", [x.shape, mu_theta.shape])
    dims = x.shape[-1] if dims is None else dims
    squared = ops.sum(ops.square(x - mu_theta), axis=-1)
    constant = 0.5 * dims * (LOG_2PI + 2.0 * np.log(sigma))
    return squared * (-0.5 / sigma**2) - constant


def sigma_ema_update(nets: CvaeNets, batch_rmse: float) -> float:
    """sigma <- decay * sigma + (1 - decay) * max(rmse, floor); returns the new sigma."""
    if batch_rmse < 0:
        raise InvalidParameterException("batch_rmse", batch_rmse, "must be >= 0")
    decay = nets.sigma_ema_decay
    nets.sigma = decay * nets.sigma + (1.0 - decay) * max(float(batch_rmse), nets.sigma_floor)
    return nets.sigma


class ProbeClassifier(Module):
    """Supervised softmax MLP d -> hidden -> hidden -> k."""

    def __init__(self, d: int, k: int, rng: np.random.Generator, hidden: int = 256, batch_norm: bool = True) -> None:
        super().__init__()
        self.d = d
        self.k = k
        self.mlp = MLP([d, hidden, hidden, k], rng, batch_norm=batch_norm)

    def children(self) -> Iterator[Tuple[str, Module]]:
        yield "mlp", self.mlp

    def log_proba(self, x: object) -> Tensor:
        return ops.log_softmax(self.mlp(_as_rows("probe", x, self.d)), axis=1)

    def cross_entropy(self, x: object, labels: np.ndarray) -> Tensor:
        """Mean negative log-likelihood of integer labels."""
        log_p = self.log_proba(x)
        onehot = np.eye(self.k)[np.asarray(labels, dtype=np.int64)]
        return -ops.mean(ops.sum(log_p * onehot, axis=1))

    def predict_proba(self, x: object) -> np.ndarray:
        was_training = self.training
        self.eval()
        try:
            with no_grad():
                log_p = self.log_proba(x).data
        finally:
            self.train(was_training)
        return np.exp(log_p)
