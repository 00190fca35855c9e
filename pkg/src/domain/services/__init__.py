"""Domain services: prior, objectives, data generation and evaluation."""

from .batching import shuffled_batches
from .candidate_generator import (
    STRATEGIES,
    add_candidates,
    generate_candidates,
    instance_rates,
    longtail_rates,
    mixed_rates,
    random_permutation,
    train_probe,
)
from .cooccurrence import cooccurrence, normalize_rows, off_diagonal, rank_profile
from .objective import (
    CANDIDATE_ESTIMATORS,
    MiniBatch,
    ObjectiveResult,
    ablation_loss,
    beta_elbo_batch,
    candidate_mass,
    expected_log_candidate_mass,
    log_candidate_mass,
    log_px_given_y,
)
from .pl_knn import PlKnn, plknn
from .prior_solver import binding_constraints, build_prior, prior_dirichlet_params, solve_max_entropy
from .statistics import WelchResult, accuracy, mean_std, not_significantly_worse, welch_ttest
from .synthetic import DEFAULT_SEPARATION, cluster_means, synth_blobs

__all__ = [
    "shuffled_batches",
    "STRATEGIES",
    "add_candidates",
    "generate_candidates",
    "instance_rates",
    "longtail_rates",
    "mixed_rates",
    "random_permutation",
    "train_probe",
    "cooccurrence",
    "normalize_rows",
    "off_diagonal",
    "rank_profile",
    "CANDIDATE_ESTIMATORS",
    "MiniBatch",
    "ObjectiveResult",
    "ablation_loss",
    "beta_elbo_batch",
    "candidate_mass",
    "expected_log_candidate_mass",
    "log_candidate_mass",
    "log_px_given_y",
    "PlKnn",
    "plknn",
    "binding_constraints",
    "build_prior",
    "prior_dirichlet_params",
    "solve_max_entropy",
    "WelchResult",
    "accuracy",
    "mean_std",
    "not_significantly_worse",
    "welch_ttest",
    "DEFAULT_SEPARATION",
    "cluster_means",
    "synth_blobs",
]
