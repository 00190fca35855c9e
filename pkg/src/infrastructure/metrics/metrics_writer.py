"""
Run output writers: per-epoch metrics CSV, matrix CSV and JSON summaries.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Mapping, Optional, Sequence, Union

import numpy as np

logger = logging.getLogger(__name__)

METRIC_COLUMNS = ("epoch", "generative_term", "candidate_term", "kl_term", "total", "wall_ms")


class MetricsWriter:
    """
    Appends one row per main-loop epoch to ``metrics.csv``.

    The header is written when the file is created.
    """

    def __init__(self, path: Union[str, Path]) -> None:
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w", newline="", encoding="utf-8") as f:
            csv.writer(f).writerow(METRIC_COLUMNS)

    def append(self, row: Mapping[str, float]) -> None:
        with open(self.path, "a", newline="", encoding="utf-8") as f:
            csv.writer(f).writerow([row[column] for column in METRIC_COLUMNS])


def write_matrix_csv(
    matrix: np.ndarray,
    path: Union[str, Path],
    labels: Optional[Sequence[str]] = None,
) -> Path:
    """
    Write a square matrix with a header row and a label column.

    Args:
        matrix: (k, k) values; integer matrices are written without decimals.
        path: Destination file.
        labels: Class names; defaults to "0".."k-1".

    Returns:
        The written path.
    """
    matrix = np.asarray(matrix)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(labels) if labels is not None else [str(j) for j in range(matrix.shape[1])]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["true_label", *names])
        for name, row in zip(names, matrix):
            writer.writerow([name, *(int(v) if np.issubdtype(matrix.dtype, np.integer) else repr(float(v)) for v in row)])
    logger.info(f"Matrix written: {path}")
    return path


def write_json(payload: Any, path: Union[str, Path]) -> Path:
    """Write an indented UTF-8 JSON document, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
        f.write("\n")
    logger.info(f"JSON written: {path}")
    return path
