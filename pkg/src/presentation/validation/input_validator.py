"""
Input validation for presentation layer.

This module provides validation of the paths and list-valued options
passed to the CLI.
"""

import re
from pathlib import Path
from typing import List, Optional


class ValidationError(ValueError):
    """Raised when input validation fails."""
    pass


class InputValidator:
    """
    Validates and normalizes user input.

    This class provides static methods for checking CLI arguments before
    they reach the use cases.
    """

    LIST_SEPARATOR = re.compile(r"[\s,]+")

    DATASET_EXTENSIONS = {".pll", ".txt"}
    MODEL_EXTENSIONS = {".json"}

    @staticmethod
    def validate_file_path(file_path: str, extensions: Optional[set] = None) -> Path:
        """
        Validate an existing input file.

        Args:
            file_path: The file path to validate.
            extensions: Allowed suffixes (any suffix when None).

        Returns:
            The validated Path object.

        Raises:
            ValidationError: If the file path is invalid.
        """
        if not file_path:
            raise ValidationError("File path cannot be empty")

        path = Path(file_path)
        if not path.exists():
            raise ValidationError(f"File does not exist: {path}")
        if not path.is_file():
            raise ValidationError(f"Path is not a file: {path}")
        if extensions is not None and path.suffix.lower() not in extensions:
            raise ValidationError(f"Unsupported file type '{path.suffix}', expected one of {sorted(extensions)}")

        return path

    @staticmethod
    def validate_dataset_path(file_path: str) -> Path:
        """Validate a ``.pll`` dataset path."""
        return InputValidator.validate_file_path(file_path, InputValidator.DATASET_EXTENSIONS)

    @staticmethod
    def validate_model_path(file_path: str) -> Path:
        """Validate a checkpoint path."""
        return InputValidator.validate_file_path(file_path, InputValidator.MODEL_EXTENSIONS)

    @staticmethod
    def validate_output_directory(dir_path: str) -> Path:
        """
        Validate the output directory, creating it when missing.

        Args:
            dir_path: The directory path.

        Returns:
            The validated Path object.

        Raises:
            ValidationError: If the path exists as a file or cannot be created.
        """
        if not dir_path:
            raise ValidationError("Output directory cannot be empty")

        path = Path(dir_path)
        if path.exists() and not path.is_dir():
            raise ValidationError(f"Path is not a directory: {path}")
        try:
            path.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ValidationError(f"Failed to create directory: {e}")

        return path

    @staticmethod
    def parse_int_list(value: Optional[str], name: str) -> Optional[List[int]]:
        """
        Parse a comma or space separated list of integers.

        Args:
            value: Raw option value (None passes through).
            name: Option name for the error message.

        Returns:
            The parsed integers, or None.

        Raises:
            ValidationError: If an item is not an integer.
        """
        if value is None:
            return None
        items = [item for item in InputValidator.LIST_SEPARATOR.split(value.strip()) if item]
        if not items:
            raise ValidationError(f"{name} cannot be empty")
        try:
            return [int(item) for item in items]
        except ValueError:
            raise ValidationError(f"{name} must be a list of integers, got '{value}'")
