"""
Learning-quality and speed checks at desk scale.

These tests train full models on the synthetic-blobs benchmark and take
minutes on a CPU; run them with ``pytest -m slow``.
"""

import logging
import time

import numpy as np
import pytest

from src.application.dto import ExperimentConfig, GenSpec, TrainConfig
from src.application.services import ExperimentService, Trainer, stratified_split
from src.domain.services import accuracy, generate_candidates, random_permutation, synth_blobs, train_probe

logger = logging.getLogger(__name__)


@pytest.fixture(scope="module")
def benchmark():
    """Blobs with n=2000, k=5, d=2 and long-tail candidate sets."""
    blobs = synth_blobs(2000, 5, 2, np.random.default_rng(11))
    spec = GenSpec()
    probe = train_probe(blobs, np.random.default_rng(12), epochs=spec.probe_epochs, hidden=64)
    return generate_candidates(
        blobs,
        probe.predict_proba(blobs.features),
        np.random.default_rng(13),
        strategy="longtail_mix",
        permutation=random_permutation(blobs.k, np.random.default_rng(14)),
    )


@pytest.fixture(scope="module")
def desk_config():
    """Reduced sample counts and widths that keep a run within minutes."""
    return TrainConfig(T=200, T_w=100, b=4, b_prime=4, hidden=64, m=8, seed=21, log_every=50)


@pytest.mark.slow
class TestLearningQuality:
    """Test held-out accuracy on the blobs benchmark."""

    def test_supervised_probe_oracle(self):
        """Test the probe classifier separates clean blobs."""
        blobs = synth_blobs(2000, 5, 2, np.random.default_rng(3))
        train_idx, test_idx = stratified_split(blobs, 0.2, seed=3)
        probe = train_probe(blobs.subset(train_idx), np.random.default_rng(4), epochs=50, hidden=64)
        test = blobs.subset(test_idx)
        assert accuracy(probe.predict_proba(test.features).argmax(axis=1), test.true_labels) >= 0.98

    def test_vipll_accuracy(self, benchmark, desk_config):
        """Test the full model averages at least 0.90 held-out accuracy over five splits."""
        logger.info(f"Benchmark mean candidate-set size {benchmark.summary().mean_candidates:.3f}")
        service = ExperimentService(desk_config, ExperimentConfig(n_seeds=5, methods=["vipll"], max_workers=5))

        start = time.perf_counter()
        run = service.run_experiment(benchmark, master_seed=5).runs[0]
        elapsed = time.perf_counter() - start

        logger.info(f"Full-model accuracies {run.accuracies}, mean {run.mean:.4f} in {elapsed:.0f}s")
        assert len(run.accuracies) == 5
        assert run.mean >= 0.90

    def test_same_seed_reproduces_accuracy(self, benchmark, desk_config):
        """Test that two runs from one seed give identical predictions."""
        config = desk_config.model_copy(update={"T": 20, "T_w": 10})
        train_idx, test_idx = stratified_split(benchmark, 0.2, seed=5)
        train, test = benchmark.subset(train_idx), benchmark.subset(test_idx)

        first = Trainer(config).fit(train, np.random.SeedSequence(config.seed)).predict(test.features)
        second = Trainer(config).fit(train, np.random.SeedSequence(config.seed)).predict(test.features)
        np.testing.assert_array_equal(first, second)
        assert accuracy(first, test.true_labels) == accuracy(second, test.true_labels)

    def test_ablation_reported(self, benchmark, desk_config):
        """Test the ablation and the baseline run through the protocol."""
        service = ExperimentService(
            desk_config.model_copy(update={"T": 100, "T_w": 50}),
            ExperimentConfig(n_seeds=2, methods=["vipll", "vipll_ablation", "plknn"], max_workers=3),
        )
        report = service.run_experiment(benchmark)
        means = {run.method: run.mean for run in report.runs}
        logger.info(f"Protocol means: {means}, ablation inferior: {report.ablation_inferior}")
        assert means["plknn"] >= 0.8
        assert report.ablation_inferior is not None


@pytest.mark.slow
class TestTrainingSpeed:
    """Test wall time of one epoch at the default batch size."""

    def test_epoch_time(self, benchmark):
        """Test one epoch over 2000 rows stays under a minute."""
        config = TrainConfig(T=1, T_w=1, b=4, b_prime=4, hidden=64, m=8)
        start = time.perf_counter()
        result = Trainer(config).fit(benchmark, np.random.SeedSequence(0))
        assert time.perf_counter() - start < 60.0
        assert result.metrics[0].wall_ms > 0.0
