import gzip
import struct
from pathlib import Path

import numpy as np
import pytest

from rdapprox.errors import IdxCountMismatchError, IdxMagicError, IdxTruncatedError
from rdapprox.io.delimited import load_dataset
from rdapprox.io.idx import is_idx_file, load_idx, read_idx_images

PIXELS = bytes([0, 255, 51, 102, 153, 204, 1, 2, 3, 4, 5, 6])


def _images(count: int = 2, pixels: bytes = PIXELS) -> bytes:
    return struct.pack(">IIII", 0x803, count, 2, 3) + pixels


def _labels(values: list[int]) -> bytes:
    return struct.pack(">II", 0x801, len(values)) + bytes(values)


def _write(path: Path, blob: bytes) -> Path:
    path.write_bytes(blob)
    return path


def test_images_become_scaled_columns(tmp_path: Path):
    images = _write(tmp_path / "images-idx3-ubyte", _images())
    labels = _write(tmp_path / "labels-idx1-ubyte", _labels([7, 2]))
    dataset = load_idx(images, labels)
    assert dataset.samples.shape == (6, 2)
    np.testing.assert_array_equal(dataset.samples[:, 0], np.array(PIXELS[:6]) / 255.0)
    assert dataset.samples[1, 0] == 1.0
    assert dataset.labels.tolist() == [7, 2]
    assert dataset.class_count == 8


def test_gzip_files_are_read(tmp_path: Path):
    images = _write(tmp_path / "images.gz", gzip.compress(_images()))
    labels = _write(tmp_path / "labels.gz", gzip.compress(_labels([0, 1])))
    assert is_idx_file(images)
    dataset = load_dataset(images, labels)
    assert dataset.sample_count == 2


def test_bad_magic(tmp_path: Path):
    path = _write(tmp_path / "images", struct.pack(">IIII", 0x802, 2, 2, 3) + PIXELS)
    with pytest.raises(IdxMagicError):
        read_idx_images(path)
    assert not is_idx_file(path)


def test_truncated_pixels(tmp_path: Path):
    path = _write(tmp_path / "images", _images(pixels=PIXELS[:7]))
    with pytest.raises(IdxTruncatedError):
        read_idx_images(path)


def test_truncated_header(tmp_path: Path):
    path = _write(tmp_path / "images", struct.pack(">II", 0x803, 2))
    with pytest.raises(IdxTruncatedError):
        read_idx_images(path)


def test_count_mismatch(tmp_path: Path):
    images = _write(tmp_path / "images", _images())
    labels = _write(tmp_path / "labels", _labels([1, 2, 3]))
    with pytest.raises(IdxCountMismatchError, match="count mismatch"):
        load_idx(images, labels)
