"""
Application layer exceptions.

This module defines exceptions raised while orchestrating training,
experiments and dataset handling, providing clear error handling for the
presentation layer.
"""

from typing import Optional, Sequence


class ApplicationException(Exception):
    """
    Base exception for all application layer errors.

    All application-specific exceptions should inherit from this class.
    This allows for consistent error handling at the presentation layer.
    """

    def __init__(self, message: str, details: Optional[str] = None) -> None:
        """
        Initialize the exception.

        Args:
            message: The main error message.
            details: Optional additional error details.
        """
        self.message = message
        self.details = details
        super().__init__(message)

    def __str__(self) -> str:
        """Get string representation of the exception."""
        if self.details:
            return f"{self.message}: {self.details}"
        return self.message


class ConfigurationException(ApplicationException):
    """
    Exception raised when a run configuration is invalid.

    This covers unreadable config files, unknown sections and values that
    violate a field's constraints.
    """

    def __init__(self, field: str, reason: str) -> None:
        """
        Initialize the configuration exception.

        Args:
            field: The offending field or section.
            reason: The reason for the rejection.
        """
        self.field = field
        self.reason = reason
        super().__init__(f"Invalid configuration field: '{field}'", reason)


class TrainingDivergedException(ApplicationException):
    """
    Exception raised when a loss becomes non-finite during training.

    Carries the epoch, batch and phase so the failing step can be located.
    """

    def __init__(self, epoch: int, batch: int, phase: str, reason: str = "loss is NaN") -> None:
        """
        Initialize the divergence exception.

        Args:
            epoch: 1-based epoch of the failing step.
            batch: 0-based batch index within the epoch.
            phase: "warmup", "main" or "probe".
            reason: What went wrong.
        """
        self.epoch = epoch
        self.batch = batch
        self.phase = phase
        self.reason = reason
        super().__init__(
            f"Training diverged in {phase} epoch {epoch}, batch {batch}",
            reason
        )


class UnknownMethodException(ApplicationException):
    """Exception raised when an experiment names a method that does not exist."""

    def __init__(self, method: str, available: Sequence[str] = ()) -> None:
        """
        Initialize the unknown method exception.

        Args:
            method: The requested method name.
            available: Names of the supported methods.
        """
        self.method = method
        self.available = list(available)
        details = f"Method '{method}' not found"
        if self.available:
            details += f". Available methods: {', '.join(self.available)}"
        super().__init__(f"Unknown method: '{method}'", details)


class DatasetLoadException(ApplicationException):
    """
    Exception raised when a dataset or model file cannot be loaded.

    This can occur due to file access issues or unusable contents.
    """

    def __init__(self, path: str, reason: str) -> None:
        """
        Initialize the dataset load exception.

        Args:
            path: The path that failed to load.
            reason: The reason for the failure.
        """
        self.path = path
        self.reason = reason
        super().__init__(f"Failed to load: '{path}'", reason)
