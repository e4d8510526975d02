"""Comma-separated numeric inputs and the dataset loader front door."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from rdapprox.errors import OutputError, ParameterError
from rdapprox.io.dataset import Dataset
from rdapprox.io.idx import is_idx_file, load_idx

logger = logging.getLogger(__name__)


def load_delimited_matrix(path: Path) -> np.ndarray:
    """Numeric matrix exactly as laid out in the file; '#' starts a comment."""
    try:
        matrix = np.loadtxt(path, delimiter=",", comments="#", ndmin=2, dtype=np.float64)
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ParameterError(f"{path}: not a numeric comma-separated matrix ({exc})") from exc
    if matrix.size == 0:
        raise ParameterError(f"{path}: no numeric rows")
    if not np.all(np.isfinite(matrix)):
        raise ParameterError(f"{path}: non-finite entries")
    return matrix


def load_labels(path: Path) -> np.ndarray:
    """One non-negative integer class index per line."""
    try:
        raw = np.loadtxt(path, delimiter=",", comments="#", ndmin=1, dtype=np.float64)
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ParameterError(f"{path}: labels must be integers ({exc})") from exc
    if raw.ndim != 1:
        raise ParameterError(f"{path}: expected one label per line")
    if not np.all(np.equal(np.mod(raw, 1), 0)) or (raw.size and raw.min() < 0):
        raise ParameterError(f"{path}: labels must be non-negative integers")
    return raw.astype(np.int64)


def load_dataset(data_path: Path, labels_path: Optional[Path] = None) -> Dataset:
    """IDX pair when the data file carries the IDX magic, delimited text otherwise.

    Delimited data holds one sample per row and is returned with samples as columns.
    """
    if is_idx_file(data_path):
        if labels_path is None:
            raise ParameterError(f"{data_path}: IDX images need an IDX labels file")
        return load_idx(data_path, labels_path)

    samples = np.ascontiguousarray(load_delimited_matrix(data_path).T)
    labels = None
    class_count = 0
    if labels_path is not None:
        labels = load_labels(labels_path)
        class_count = int(labels.max()) + 1 if labels.size else 0
    logger.info(f"Loaded {samples.shape[1]} samples of dim {samples.shape[0]} from {data_path}")
    return Dataset(
        samples=samples, labels=labels, class_count=class_count, provenance=str(data_path)
    )
