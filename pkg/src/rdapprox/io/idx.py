"""MNIST IDX reader."""

from __future__ import annotations

import gzip
import logging
import struct
from pathlib import Path
from typing import Tuple

import numpy as np

from rdapprox.errors import IdxCountMismatchError, IdxMagicError, IdxTruncatedError, OutputError
from rdapprox.io.dataset import Dataset

logger = logging.getLogger(__name__)

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


def _read_bytes(path: Path) -> bytes:
    try:
        if path.suffix == ".gz":
            with gzip.open(path, "rb") as handle:
                return handle.read()
        return path.read_bytes()
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from exc


def _header(blob: bytes, path: Path, magic: int, fields: int) -> Tuple[int, ...]:
    size = 4 * (1 + fields)
    if len(blob) < size:
        raise IdxTruncatedError(f"{path}: header needs {size} bytes, file has {len(blob)}")
    values = struct.unpack_from(f">{1 + fields}I", blob)
    if values[0] != magic:
        raise IdxMagicError(f"{path}: bad magic 0x{values[0]:08x}, expected 0x{magic:08x}")
    return values[1:]


def read_idx_images(path: Path) -> np.ndarray:
    """Images as an (items, rows * cols) uint8 array."""
    blob = _read_bytes(path)
    items, rows, cols = _header(blob, path, IMAGES_MAGIC, 3)
    expected = items * rows * cols
    payload = np.frombuffer(blob, dtype=np.uint8, offset=16)
    if payload.size < expected:
        raise IdxTruncatedError(f"{path}: expected {expected} pixel bytes, found {payload.size}")
    return payload[:expected].reshape(items, rows * cols)


def read_idx_labels(path: Path) -> np.ndarray:
    blob = _read_bytes(path)
    (items,) = _header(blob, path, LABELS_MAGIC, 1)
    payload = np.frombuffer(blob, dtype=np.uint8, offset=8)
    if payload.size < items:
        raise IdxTruncatedError(f"{path}: expected {items} labels, found {payload.size}")
    return payload[:items].astype(np.int64)


def load_idx(images_path: Path, labels_path: Path) -> Dataset:
    """Pixels scaled by 1/255, one image per column."""
    images = read_idx_images(images_path)
    labels = read_idx_labels(labels_path)
    if images.shape[0] != labels.size:
        raise IdxCountMismatchError(
            f"count mismatch: {images.shape[0]} images in {images_path}, "
            f"{labels.size} labels in {labels_path}"
        )
    samples = np.ascontiguousarray(images.T, dtype=np.float64) / 255.0
    class_count = int(labels.max()) + 1 if labels.size else 0
    logger.info(f"Loaded {labels.size} IDX images of dimension {samples.shape[0]}")
    return Dataset(
        samples=samples, labels=labels, class_count=class_count, provenance=str(images_path)
    )


def is_idx_file(path: Path) -> bool:
    """True when the leading bytes carry an IDX images or labels magic."""
    opener = gzip.open if path.suffix == ".gz" else open
    try:
        with opener(path, "rb") as handle:
            blob = handle.read(4)
    except OSError:
        return False
    return len(blob) == 4 and struct.unpack(">I", blob)[0] in (IMAGES_MAGIC, LABELS_MAGIC)
