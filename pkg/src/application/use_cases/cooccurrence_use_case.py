"""
Co-occurrence Use Case.

This module implements the use case for the candidate co-occurrence matrix
of a labelled dataset.
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ...domain.services import cooccurrence, normalize_rows, off_diagonal, rank_profile
from ...infrastructure.metrics import write_matrix_csv
from ..services.dataset_service import DatasetService

logger = logging.getLogger(__name__)


class CooccurrenceUseCase:
    """Use case for writing cooc.csv and cooc_normalized.csv."""

    def __init__(self, dataset_service: DatasetService) -> None:
        """
        Initialize the use case.

        Args:
            dataset_service: Service for reading datasets.
        """
        self.dataset_service = dataset_service

    def execute(
        self,
        dataset_path: str,
        out_dir: str,
        permutation: Optional[Sequence[int]] = None,
    ) -> Dict[str, Any]:
        """
        Execute the co-occurrence count.

        Args:
            dataset_path: Path to a ``.pll`` file with true labels.
            out_dir: Directory for the CSV files.
            permutation: Class ranks used to order the column-sum profile.

        Returns:
            Dictionary with the matrix, file paths and the rank profile.

        Raises:
            MissingLabelsException: If the dataset has no true labels.
        """
        logger.info(f"Executing co-occurrence use case: dataset={dataset_path}")

        dataset = self.dataset_service.load(dataset_path)
        matrix = cooccurrence(dataset)
        out = Path(out_dir)
        raw_path = write_matrix_csv(matrix, out / "cooc.csv")
        normalized_path = write_matrix_csv(normalize_rows(matrix), out / "cooc_normalized.csv")

        return {
            "dataset": dataset.name,
            "matrix": matrix.tolist(),
            "off_diagonal_total": int(off_diagonal(matrix).sum()),
            "rank_profile": rank_profile(matrix, permutation).tolist(),
            "cooc_path": str(raw_path),
            "normalized_path": str(normalized_path),
        }
