"""
Unit tests for the environment-driven application config.
"""

import pytest

from src.application.config import AppConfig, get_config


@pytest.mark.unit
class TestAppConfig:
    """Test AppConfig."""

    def test_singleton(self):
        """Test that get_config returns one instance until reset."""
        assert get_config() is get_config()
        first = get_config()
        AppConfig.reset()
        assert get_config() is not first

    def test_defaults(self, monkeypatch):
        """Test defaults without environment overrides."""
        for name in ("PLLVI_OUTPUT_DIR", "PLLVI_WORKERS", "PLLVI_CHECKPOINT_EVERY", "PLLVI_LOG_LEVEL"):
            monkeypatch.delenv(name, raising=False)
        config = get_config()
        assert config.output_directory == "./runs"
        assert config.max_workers == 1
        assert config.checkpoint_every == 0
        assert config.log_level == "INFO"
        assert config.show_progress is False

    def test_environment_overrides(self, monkeypatch, tmp_path):
        """Test environment variables are read."""
        monkeypatch.setenv("PLLVI_OUTPUT_DIR", str(tmp_path / "runs"))
        monkeypatch.setenv("PLLVI_WORKERS", "3")
        monkeypatch.setenv("PLLVI_CHECKPOINT_EVERY", "5")
        monkeypatch.setenv("PLLVI_LOG_LEVEL", "debug")
        config = get_config()
        assert config.get_output_directory() == tmp_path / "runs"
        assert config.max_workers == 3
        assert config.checkpoint_every == 5
        assert config.log_level == "DEBUG"
        assert config.validate() == []

    def test_validate_reports_problems(self, monkeypatch, tmp_path):
        """Test invalid settings are listed."""
        blocker = tmp_path / "file"
        blocker.write_text("x", encoding="utf-8")
        monkeypatch.setenv("PLLVI_OUTPUT_DIR", str(blocker))
        monkeypatch.setenv("PLLVI_WORKERS", "0")
        monkeypatch.setenv("PLLVI_LOG_LEVEL", "LOUD")
        monkeypatch.delenv("PLLVI_CHECKPOINT_EVERY", raising=False)
        errors = get_config().validate()
        assert len(errors) == 3

    def test_ensure_directories(self, monkeypatch, tmp_path):
        """Test the output directory is created."""
        monkeypatch.setenv("PLLVI_OUTPUT_DIR", str(tmp_path / "a" / "b"))
        get_config().ensure_directories()
        assert (tmp_path / "a" / "b").is_dir()

    @pytest.mark.parametrize("name", ["PLLVI_WORKERS", "PLLVI_CHECKPOINT_EVERY"])
    def test_non_integer_value_is_reported(self, monkeypatch, name):
        """Test a malformed integer keeps the default and shows up in validate()."""
        monkeypatch.setenv(name, "abc")
        config = get_config()
        assert config.max_workers >= 1
        assert config.checkpoint_every >= 0
        errors = config.validate()
        assert any(name in error and "'abc'" in error for error in errors)
