"""
End-to-end tests for the CLI application.

These tests run ``main_cli.py`` in a subprocess and check exit codes and
the files each command writes.
"""

import csv
import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

# Project root
PROJECT_ROOT = Path(__file__).parent.parent.parent

TINY_RUN = {
    "train": {"T": 2, "T_w": 2, "n_m": 16, "b": 2, "b_prime": 2, "m": 2, "hidden": 8},
    "generation": {"probe_epochs": 5, "probe_hidden": 8},
    "experiment": {"n_seeds": 2, "k_neighbors": 3},
}


@pytest.fixture
def cli_script():
    """Return path to CLI script."""
    return PROJECT_ROOT / "main_cli.py"


@pytest.fixture
def run(cli_script, tmp_path):
    """Run a pllvi command inside tmp_path."""
    env = {**os.environ, "PLLVI_PROGRESS": "false", "PLLVI_LOG_LEVEL": "WARNING"}

    def _run(*args, **env_overrides):
        return subprocess.run(
            [sys.executable, str(cli_script), *map(str, args)],
            capture_output=True,
            text=True,
            cwd=tmp_path,
            env={**env, **env_overrides},
        )

    return _run


@pytest.fixture
def config_file(tmp_path):
    """Small run configuration."""
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(TINY_RUN), encoding="utf-8")
    return path


@pytest.mark.e2e
class TestCLIGenerate:
    """Test the generate command."""

    def test_generate_blobs(self, run, tmp_path, config_file):
        """Test a dataset and summary.json are written."""
        result = run("generate", "--n", 60, "--k", 3, "--seed", 1, "--config", config_file, "--out", tmp_path / "gen")

        assert result.returncode == 0, result.stderr
        summary = json.loads((tmp_path / "gen" / "summary.json").read_text(encoding="utf-8"))
        assert summary["summary"]["n"] == 60
        assert Path(summary["dataset_path"]).exists()
        assert "Dataset generated" in result.stdout

    def test_bad_permutation(self, run, tmp_path, config_file):
        """Test a non-permutation is a validation error."""
        result = run("generate", "--k", 3, "--permutation", "0,0,1", "--config", config_file, "--out", tmp_path)
        assert result.returncode == 2
        assert "INVALID INPUT" in result.stderr

    def test_bad_config_key(self, run, tmp_path):
        """Test unknown config keys exit with 2."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"train": {"epochs": 5}}), encoding="utf-8")
        result = run("generate", "--config", path, "--out", tmp_path)
        assert result.returncode == 2
        assert "train.epochs" in result.stderr


@pytest.mark.e2e
class TestCLIDatasetCommands:
    """Test prior, train, eval and cooc on a generated file."""

    @pytest.fixture
    def dataset(self, run, tmp_path, config_file):
        """Generate a small dataset."""
        result = run("generate", "--n", 60, "--k", 3, "--seed", 2, "--config", config_file, "--out", tmp_path / "gen")
        assert result.returncode == 0, result.stderr
        return json.loads((tmp_path / "gen" / "summary.json").read_text(encoding="utf-8"))["dataset_path"]

    def test_prior_prints_json(self, run, tmp_path, dataset):
        """Test prior prints pi and alpha_pi and writes prior.json."""
        result = run("prior", dataset, "--delta", 0.5, "--out", tmp_path / "prior")
        assert result.returncode == 0, result.stderr
        assert '"alpha_pi"' in result.stdout
        payload = json.loads((tmp_path / "prior" / "prior.json").read_text(encoding="utf-8"))
        assert sum(payload["pi"]) == pytest.approx(1.0)
        assert min(payload["alpha_pi"]) == pytest.approx(1.0)

    def test_train_and_score(self, run, tmp_path, dataset, config_file):
        """Test train writes the run directory and eval --model scores it."""
        result = run("train", dataset, "--config", config_file, "--seed", 3, "--out", tmp_path / "train")
        assert result.returncode == 0, result.stderr
        with open(tmp_path / "train" / "metrics.csv", newline="", encoding="utf-8") as f:
            assert len(list(csv.reader(f))) == 3

        scored = run("eval", dataset, "--model", tmp_path / "train" / "model.json", "--out", tmp_path / "score")
        assert scored.returncode == 0, scored.stderr
        report = json.loads((tmp_path / "score" / "report.json").read_text(encoding="utf-8"))
        assert 0.0 <= report["accuracy"] <= 1.0

    def test_eval_report(self, run, tmp_path, dataset, config_file):
        """Test the protocol writes report.json with n_seeds accuracies."""
        result = run("eval", dataset, "-m", "plknn", "--config", config_file, "--seed", 4, "--out", tmp_path / "eval")
        assert result.returncode == 0, result.stderr
        report = json.loads((tmp_path / "eval" / "report.json").read_text(encoding="utf-8"))
        assert report["runs"][0]["method"] == "plknn"
        assert len(report["runs"][0]["accuracies"]) == 2
        assert report["master_seed"] == 4

    def test_eval_unknown_method(self, run, tmp_path, dataset, config_file):
        """Test an unknown method exits with 2."""
        result = run("eval", dataset, "-m", "svm", "--config", config_file, "--out", tmp_path)
        assert result.returncode == 2

    def test_cooc(self, run, tmp_path, dataset):
        """Test cooc.csv holds a k x k matrix with a header."""
        result = run("cooc", dataset, "--out", tmp_path / "cooc")
        assert result.returncode == 0, result.stderr
        with open(tmp_path / "cooc" / "cooc.csv", newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["true_label", "0", "1", "2"]
        assert sum(int(rows[j + 1][j + 1]) for j in range(3)) == 60


@pytest.mark.e2e
class TestCLIErrors:
    """Test exit codes for bad input."""

    def test_missing_dataset(self, run, tmp_path):
        """Test a missing file exits with 2."""
        result = run("prior", tmp_path / "absent.pll")
        assert result.returncode == 2

    def test_malformed_dataset(self, run, tmp_path):
        """Test a format error names the line and exits with 2."""
        path = tmp_path / "bad.pll"
        path.write_text("1 1 2\n0.5 00 -1\n", encoding="utf-8")
        result = run("prior", path)
        assert result.returncode == 2
        assert "bad.pll:2" in result.stderr

    def test_invalid_hyperparameter(self, run, tmp_path):
        """Test out-of-range config values exit with 2."""
        data = tmp_path / "ok.pll"
        data.write_text("2 1 2\n0.5 10 0\n0.7 01 1\n", encoding="utf-8")
        path = tmp_path / "beta.json"
        path.write_text(json.dumps({"train": {"beta": 0}}), encoding="utf-8")
        result = run("train", data, "--config", path, "--out", tmp_path)
        assert result.returncode == 2
        assert "train.beta" in result.stderr

    def test_eval_without_labels(self, run, tmp_path):
        """Test evaluation of unlabelled data exits with 2."""
        data = tmp_path / "u.pll"
        data.write_text("2 1 2\n0.5 11 -1\n0.7 01 -1\n", encoding="utf-8")
        result = run("cooc", data, "--out", tmp_path)
        assert result.returncode == 2

    @pytest.mark.parametrize("workers", ["0", "abc"])
    def test_bad_worker_environment(self, run, tmp_path, workers):
        """Test an invalid PLLVI_WORKERS exits with 2 before any command runs."""
        data = tmp_path / "ok.pll"
        data.write_text("2 1 2\n0.5 10 0\n0.7 01 1\n", encoding="utf-8")
        result = run("prior", data, PLLVI_WORKERS=workers)
        assert result.returncode == 2
        assert "PLLVI_WORKERS" in result.stderr or "Worker count" in result.stderr
        assert "Traceback" not in result.stderr

    def test_verbose_prints_traceback(self, run, tmp_path):
        """Test --verbose adds the traceback to the error message."""
        path = tmp_path / "bad.pll"
        path.write_text("1 1 2\n0.5 00 -1\n", encoding="utf-8")
        quiet = run("prior", path)
        verbose = run("--verbose", "prior", path)
        assert quiet.returncode == verbose.returncode == 2
        assert "Traceback" not in quiet.stderr
        assert "Traceback" in verbose.stderr
