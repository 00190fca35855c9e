"""Networks: MLP layers, Dirichlet classifier, CVAE and probe classifier."""

from .layers import MLP, BatchNorm1d, Linear, Module, kaiming_uniform
from .networks import (
    ClassifierNet,
    CvaeNets,
    ProbeClassifier,
    classifier_alpha,
    cvae_forward,
    predict,
    recon_loglik,
    sigma_ema_update,
)

__all__ = [
    "Module",
    "Linear",
    "BatchNorm1d",
    "MLP",
    "kaiming_uniform",
    "ClassifierNet",
    "CvaeNets",
    "ProbeClassifier",
    "classifier_alpha",
    "cvae_forward",
    "predict",
    "recon_loglik",
    "sigma_ema_update",
]
