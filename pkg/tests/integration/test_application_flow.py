"""
Integration tests for end-to-end application flow.

These tests verify the complete flow from generating a dataset to
training, scoring a saved model and evaluating against baselines.
"""

import json

import pytest

from src.application.config import AppConfig
from src.application.container import Container, get_container, reset_container
from src.application.dto import ExperimentConfig, GenSpec, RunConfig
from src.application.exceptions import ConfigurationException
from src.application.services import DatasetService


@pytest.mark.integration
class TestContainer:
    """Test container wiring."""

    def test_dataset_service_is_singleton(self):
        """Test services are created once per container."""
        container = Container()
        assert isinstance(container.dataset_service(), DatasetService)
        assert container.dataset_service() is container.dataset_service()

    def test_use_cases_are_fresh(self):
        """Test use cases are created on every call."""
        container = Container()
        assert container.train_model_use_case() is not container.train_model_use_case()

    def test_reset_drops_services(self):
        """Test reset recreates services."""
        container = Container()
        first = container.dataset_service()
        container.reset()
        assert container.dataset_service() is not first

    def test_global_container(self):
        """Test get_container returns one instance until reset."""
        first = get_container()
        assert get_container() is first
        reset_container()
        assert get_container() is not first

    def test_use_cases_follow_config(self, monkeypatch):
        """Test environment settings reach the use cases."""
        monkeypatch.setenv("PLLVI_WORKERS", "3")
        AppConfig.reset()
        use_case = Container(AppConfig()).evaluate_use_case()
        assert use_case.max_workers == 3
        assert use_case.show_progress is False

    def test_ensure_ready_rejects_bad_environment(self, monkeypatch):
        """Test invalid environment settings stop the container."""
        monkeypatch.setenv("PLLVI_WORKERS", "0")
        AppConfig.reset()
        with pytest.raises(ConfigurationException):
            Container(AppConfig()).ensure_ready()

    def test_ensure_ready_creates_output_directory(self, monkeypatch, tmp_path):
        """Test a valid configuration prepares the output directory."""
        monkeypatch.setenv("PLLVI_OUTPUT_DIR", str(tmp_path / "runs"))
        AppConfig.reset()
        Container(AppConfig()).ensure_ready()
        assert (tmp_path / "runs").is_dir()


@pytest.mark.integration
class TestApplicationFlow:
    """Test the generate, train, score and evaluate sequence."""

    @pytest.fixture
    def container(self):
        """Create a fresh container for each test."""
        container = Container()
        yield container
        container.reset()

    def test_complete_flow(self, container, tmp_path, tiny_config):
        """Test the complete application flow."""
        spec = GenSpec(probe_epochs=10, probe_hidden=8, probe_seed=2)
        generated = container.generate_data_use_case().execute(
            str(tmp_path / "data"), spec, seed=2, n=90, k=3, d=2, separation=6.0
        )
        dataset_path = generated["dataset_path"]

        prior = container.solve_prior_use_case().execute(dataset_path, 0.5)
        assert sum(prior["pi"]) == pytest.approx(1.0)
        assert all(low - 1e-9 <= p <= high + 1e-9 for p, low, high in zip(prior["pi"], prior["lower"], prior["upper"]))

        trained = container.train_model_use_case().execute(dataset_path, tiny_config, str(tmp_path / "train"))
        scored = container.evaluate_use_case().execute_model(trained["model_path"], dataset_path, str(tmp_path / "score"))
        assert scored["accuracy"] == pytest.approx(trained["train_accuracy"])

        run_config = RunConfig(train=tiny_config, experiment=ExperimentConfig(n_seeds=2, k_neighbors=3))
        report = container.evaluate_use_case().execute_experiment(
            dataset_path, run_config, str(tmp_path / "eval"), methods=["vipll", "vipll_ablation", "plknn"]
        )
        assert {run["method"] for run in report["runs"]} == {"vipll", "vipll_ablation", "plknn"}
        assert isinstance(report["ablation_inferior"], bool)
        assert any(run["not_significantly_worse"] for run in report["runs"])

        cooc = container.cooccurrence_use_case().execute(dataset_path, str(tmp_path / "cooc"))
        diagonal = [cooc["matrix"][j][j] for j in range(3)]
        assert sum(diagonal) == 90

        saved = json.loads((tmp_path / "eval" / "report.json").read_text(encoding="utf-8"))
        assert saved["master_seed"] == tiny_config.seed
