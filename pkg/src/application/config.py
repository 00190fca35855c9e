"""
Application configuration.

This module provides process-level configuration using environment
variables and sensible defaults. Run-level settings (epochs, sample counts,
generation strategy) live in the pydantic DTOs.
"""

import os
import logging
from pathlib import Path
from typing import Optional

_TRUE_VALUES = ("true", "1", "yes", "on")


class AppConfig:
    """
    Application configuration with environment variable support.

    This class follows the singleton pattern to ensure a single
    configuration instance across the application.

    Attributes:
        output_directory: Default directory for run artifacts (default: "./runs").
        max_workers: Default number of concurrent seed runs (default: 1).
        show_progress: Whether to draw tqdm progress bars (default: True).
        checkpoint_every: Default checkpoint interval in epochs, 0 = final only.
        log_level: Logging level (default: "INFO").
    """

    _instance: Optional["AppConfig"] = None

    def __new__(cls) -> "AppConfig":
        """
        Create or return the singleton instance.

        Returns:
            The singleton AppConfig instance.
        """
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialized = False
        return cls._instance

    def __init__(self) -> None:
        """Initialize the configuration from environment variables."""
        if self._initialized:
            return

        self._parse_errors: list[str] = []

        self.output_directory = os.getenv("PLLVI_OUTPUT_DIR", "./runs")

        self.max_workers = self._int_from_env("PLLVI_WORKERS", 1)

        self.show_progress = os.getenv("PLLVI_PROGRESS", "true").lower() in _TRUE_VALUES

        self.checkpoint_every = self._int_from_env("PLLVI_CHECKPOINT_EVERY", 0)

        self.log_level = os.getenv("PLLVI_LOG_LEVEL", "INFO").upper()

        self._configure_logging()

        self._initialized = True

    def _int_from_env(self, name: str, default: int) -> int:
        """Read an integer variable; a malformed value keeps the default and is reported by validate()."""
        raw = os.getenv(name)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            self._parse_errors.append(f"{name} must be an integer, got: {raw!r}")
            return default

    def _configure_logging(self) -> None:
        """Configure application logging based on log_level."""
        level_map = {
            "DEBUG": logging.DEBUG,
            "INFO": logging.INFO,
            "WARNING": logging.WARNING,
            "ERROR": logging.ERROR,
            "CRITICAL": logging.CRITICAL,
        }

        log_level = level_map.get(self.log_level, logging.INFO)

        logging.basicConfig(
            level=log_level,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )

        app_logger = logging.getLogger("src")
        app_logger.setLevel(log_level)

    def get_output_directory(self) -> Path:
        """
        Get the output directory as a Path object.

        Returns:
            Path object for the output directory.
        """
        return Path(self.output_directory)

    def validate(self) -> list[str]:
        """
        Validate the configuration.

        Returns:
            List of validation error messages (empty if valid).
        """
        errors = list(self._parse_errors)

        out_dir = self.get_output_directory()
        if out_dir.exists() and not out_dir.is_dir():
            errors.append(f"Output path is not a directory: {out_dir}")

        if self.max_workers <= 0:
            errors.append(f"Worker count must be positive, got: {self.max_workers}")

        if self.checkpoint_every < 0:
            errors.append(f"Checkpoint interval must be >= 0, got: {self.checkpoint_every}")

        if self.log_level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"Unknown log level: {self.log_level}")

        return errors

    def ensure_directories(self) -> None:
        """Create the output directory if it doesn't exist."""
        self.get_output_directory().mkdir(parents=True, exist_ok=True)

    def __repr__(self) -> str:
        """Get string representation of the configuration."""
        return (
            f"AppConfig("
            f"output_directory='{self.output_directory}', "
            f"max_workers={self.max_workers}, "
            f"show_progress={self.show_progress}, "
            f"log_level='{self.log_level}')"
        )

    @classmethod
    def reset(cls) -> None:
        """
        Reset the singleton instance.

        This is primarily useful for testing purposes.
        """
        cls._instance = None


def get_config() -> AppConfig:
    """
    Get the application configuration instance.

    Returns:
        The singleton AppConfig instance.
    """
    return AppConfig()
