"""Dirichlet and diagonal-Gaussian distributions with tape-aware sampling."""

from .dirichlet import (
    SIMPLEX_EPS,
    DirichletSample,
    dirichlet_log_prob,
    dirichlet_rsample,
    dirichlet_sample_grad,
    expected_log_subset_mass,
    gamma_alpha_derivative,
    kl_dirichlet,
    sample_dirichlet,
)
from .gaussian import (
    LOG_VAR_MAX,
    LOG_VAR_MIN,
    gaussian_log_prob,
    kl_gaussian_std,
    sample_gaussian,
    standard_normal_log_prob,
)
from .reductions import log_sum_exp

__all__ = [
    "SIMPLEX_EPS",
    "DirichletSample",
    "sample_dirichlet",
    "dirichlet_rsample",
    "dirichlet_sample_grad",
    "gamma_alpha_derivative",
    "kl_dirichlet",
    "dirichlet_log_prob",
    "expected_log_subset_mass",
    "LOG_VAR_MIN",
    "LOG_VAR_MAX",
    "sample_gaussian",
    "kl_gaussian_std",
    "gaussian_log_prob",
    "standard_normal_log_prob",
    "log_sum_exp",
]
