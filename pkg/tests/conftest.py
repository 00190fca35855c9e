"""
Shared fixtures for the pllvi test suite.
"""

import numpy as np
import pytest

from src.application.config import AppConfig
from src.application.container import reset_container
from src.application.dto import ExperimentConfig, TrainConfig
from src.domain.services import synth_blobs
from src.infrastructure.datasets import save_dataset


@pytest.fixture(autouse=True)
def fresh_singletons(monkeypatch):
    """Reset the config singleton and the global container around every test."""
    monkeypatch.setenv("PLLVI_PROGRESS", "false")
    AppConfig.reset()
    reset_container()
    yield
    AppConfig.reset()
    reset_container()


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_config():
    """Training settings small enough for unit tests."""
    return TrainConfig(T=2, T_w=2, n_m=16, b=2, b_prime=2, m=2, hidden=8, seed=3)


@pytest.fixture
def tiny_experiment():
    """Two-seed protocol with the PL-kNN neighbourhood kept small."""
    return ExperimentConfig(n_seeds=2, k_neighbors=3)


@pytest.fixture
def blobs():
    """Well-separated labelled blobs with singleton candidate sets."""
    return synth_blobs(60, 3, 2, np.random.default_rng(7), separation=6.0)


@pytest.fixture
def partial_blobs(blobs):
    """Blobs where every odd row also carries the next class as a candidate."""
    candidates = blobs.candidates.copy()
    labels = blobs.true_labels
    odd = np.arange(blobs.n) % 2 == 1
    candidates[odd, (labels[odd] + 1) % blobs.k] = True
    return blobs.with_candidates(candidates, name="partial-blobs")


@pytest.fixture
def dataset_file(tmp_path, partial_blobs):
    """``.pll`` file holding partial_blobs."""
    return save_dataset(partial_blobs, tmp_path / "partial.pll")
