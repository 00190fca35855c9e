"""
Reader and writer for ``.pll`` dataset files.

Format (UTF-8 text):
    line 1: ``n d k``
    then n rows: d space-separated floats, a k-character 0/1 candidate
    mask, and the true label (or -1 when unknown).
Lines starting with ``#`` and blank lines are ignored.
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ...domain.entities.pll_dataset import PLLDataset

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class PLLFormatError(Exception):
    """Raised when a ``.pll`` file is malformed."""

    def __init__(self, path: str, line: int, reason: str) -> None:
        self.path = path
        self.line = line
        self.reason = reason
        super().__init__(f"{path}:{line}: {reason}")


def _content_lines(text: str) -> List[Tuple[int, str]]:
    lines = []
    for number, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            lines.append((number, stripped))
    return lines


def _parse_header(path: str, number: int, line: str) -> Tuple[int, int, int]:
    parts = line.split()
    if len(parts) != 3:
        raise PLLFormatError(path, number, f"header must be 'n d k', got '{line}'")
    try:
        n, d, k = (int(p) for p in parts)
    except ValueError:
        raise PLLFormatError(path, number, f"header values must be integers, got '{line}'")
    if n < 0 or d < 1 or k < 1:
        raise PLLFormatError(path, number, f"header needs n >= 0, d >= 1, k >= 1, got '{line}'")
    return n, d, k


def _parse_row(path: str, number: int, line: str, d: int, k: int) -> Tuple[List[float], List[bool], int]:
    parts = line.split()
    if len(parts) != d + 2:
        raise PLLFormatError(path, number, f"expected {d} features, a mask and a label; got {len(parts)} fields")
    try:
        features = [float(p) for p in parts[:d]]
    except ValueError:
        raise PLLFormatError(path, number, "features must be numbers")
    if not np.all(np.isfinite(features)):
        raise PLLFormatError(path, number, "features must be finite numbers")

    mask = parts[d]
    if len(mask) != k or set(mask) - {"0", "1"}:
        raise PLLFormatError(path, number, f"candidate mask must be {k} characters of 0/1, got '{mask}'")
    candidates = [c == "1" for c in mask]
    if not any(candidates):
        raise PLLFormatError(path, number, "candidate set is empty")

    try:
        label = int(parts[d + 1])
    except ValueError:
        raise PLLFormatError(path, number, f"label must be an integer, got '{parts[d + 1]}'")
    if label != -1:
        if not 0 <= label < k:
            raise PLLFormatError(path, number, f"label {label} outside [0, {k})")
        if not candidates[label]:
            raise PLLFormatError(path, number, f"label {label} is not in the candidate set")
    return features, candidates, label


def load_dataset(path: PathLike) -> PLLDataset:
    """
    Parse a ``.pll`` file.

    Args:
        path: File to read.

    Returns:
        PLLDataset named after the file stem; true_labels is None when every
        row carries -1.

    Raises:
        PLLFormatError: On any structural problem, with the 1-based line number.
        FileNotFoundError: If the file doesn't exist.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Dataset file not found: {path}")

    raw = path.read_bytes()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise PLLFormatError(str(path), raw[: e.start].count(b"\n") + 1, "file is not valid UTF-8") from e
    lines = _content_lines(text)
    if not lines:
        raise PLLFormatError(str(path), 1, "missing header")

    n, d, k = _parse_header(str(path), *lines[0])
    rows = lines[1:]
    if len(rows) != n:
        last = rows[-1][0] if rows else lines[0][0]
        raise PLLFormatError(str(path), last, f"header declares {n} rows, found {len(rows)}")

    features = np.empty((n, d))
    candidates = np.zeros((n, k), dtype=bool)
    labels = np.empty(n, dtype=np.int64)
    for i, (number, line) in enumerate(rows):
        x, s, y = _parse_row(str(path), number, line, d, k)
        features[i], candidates[i], labels[i] = x, s, y

    known = labels != -1
    if known.any() and not known.all():
        first_missing = rows[int(np.flatnonzero(~known)[0])][0]
        raise PLLFormatError(str(path), first_missing, "true labels must be given for all rows or none")

    logger.info(f"Loaded {path.name}: n={n}, d={d}, k={k}")
    return PLLDataset(features, candidates, labels if n and known.all() else None, name=path.stem)


def save_dataset(ds: PLLDataset, path: PathLike, comments: Optional[Sequence[str]] = None) -> Path:
    """
    Write a dataset as ``.pll``; floats use their shortest exact repr.

    Args:
        ds: Dataset to write.
        path: Destination file (parent directories are created).
        comments: Optional provenance lines written as ``#`` comments.

    Returns:
        The written path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    labels = ds.true_labels if ds.true_labels is not None else np.full(ds.n, -1)

    out = [f"# {line}" for line in comments or ()]
    out.append(f"{ds.n} {ds.d} {ds.k}")
    for x, s, y in zip(ds.features, ds.candidates, labels):
        values = " ".join(repr(float(v)) for v in x)
        mask = "".join("1" if c else "0" for c in s)
        out.append(f"{values} {mask} {int(y)}")
    path.write_text("\n".join(out) + "\n", encoding="utf-8")
    logger.info(f"Saved {ds.n} rows to {path}")
    return path
