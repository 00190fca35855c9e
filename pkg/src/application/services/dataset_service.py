"""
Dataset Service.

This module provides loading and saving of ``.pll`` datasets for the use
cases.
"""

import logging
from pathlib import Path
from typing import Optional, Sequence, Union

from ...domain.entities import PLLDataset
from ...infrastructure.datasets import load_dataset, save_dataset
from ..config import AppConfig
from ..exceptions import DatasetLoadException

logger = logging.getLogger(__name__)


class DatasetService:
    """
    Service for reading and writing datasets.

    Format errors (PLLFormatError) propagate unchanged so the caller can
    report the offending line; access problems become DatasetLoadException.
    """

    def __init__(self, config: AppConfig) -> None:
        """
        Initialize the dataset service.

        Args:
            config: Application configuration.
        """
        self.config = config

    def load(self, path: Union[str, Path]) -> PLLDataset:
        """
        Load a dataset file.

        Args:
            path: Path to the ``.pll`` file.

        Returns:
            The parsed dataset.

        Raises:
            DatasetLoadException: If the path is missing or not a file.
            PLLFormatError: If the contents are malformed.
        """
        file_path = Path(path)
        if not file_path.exists():
            raise DatasetLoadException(str(path), "File does not exist")
        if not file_path.is_file():
            raise DatasetLoadException(str(path), "Path is not a file")

        try:
            dataset = load_dataset(file_path)
        except OSError as e:
            raise DatasetLoadException(str(path), str(e)) from e

        logger.info(f"Dataset ready: {dataset!r}")
        return dataset

    def save(
        self,
        dataset: PLLDataset,
        path: Union[str, Path],
        comments: Optional[Sequence[str]] = None,
    ) -> Path:
        """
        Save a dataset file.

        Args:
            dataset: Dataset to write.
            path: Destination path.
            comments: Provenance lines for the file header.

        Returns:
            The written path.
        """
        return save_dataset(dataset, path, comments=comments)
