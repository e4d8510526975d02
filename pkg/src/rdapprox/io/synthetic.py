"""Seeded union-of-subspaces data, a desk-scale stand-in for MNIST."""

from __future__ import annotations

import logging

import numpy as np

from rdapprox.config import SyntheticConfig
from rdapprox.errors import ParameterError
from rdapprox.io.dataset import Dataset

logger = logging.getLogger(__name__)


def _orthonormal(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.standard_normal((rows, cols)))
    return q


def class_bases(settings: SyntheticConfig, rng: np.random.Generator) -> list[np.ndarray]:
    d = settings.subspace_dim
    if settings.orthogonal:
        if settings.class_count * d > settings.dim:
            raise ParameterError(
                f"{settings.class_count} orthogonal {d}-dim subspaces do not fit in "
                f"dimension {settings.dim}"
            )
        q = _orthonormal(rng, settings.dim, settings.class_count * d)
        return [q[:, j * d : (j + 1) * d] for j in range(settings.class_count)]
    return [_orthonormal(rng, settings.dim, d) for _ in range(settings.class_count)]


def generate_synthetic(settings: SyntheticConfig) -> Dataset:
    """Every class is basis @ gaussian coefficients + noise * gaussian, in class blocks.

    Each class block holds train_per_class + test_per_class columns; split_per_class
    with train_per_class recovers the intended split.
    """
    rng = np.random.default_rng(settings.seed)
    bases = class_bases(settings, rng)
    count = settings.train_per_class + settings.test_per_class
    blocks = []
    for basis in bases:
        coefficients = rng.standard_normal((settings.subspace_dim, count))
        noise = settings.noise * rng.standard_normal((settings.dim, count))
        blocks.append(basis @ coefficients + noise)
    labels = np.repeat(np.arange(settings.class_count, dtype=np.int64), count)
    logger.debug(
        f"Synthetic data: {settings.class_count} classes x {count} samples, n={settings.dim}, "
        f"subspace dim {settings.subspace_dim}, noise {settings.noise}, seed {settings.seed}"
    )
    return Dataset(
        samples=np.ascontiguousarray(np.hstack(blocks)),
        labels=labels,
        class_count=settings.class_count,
        provenance=f"synthetic(seed={settings.seed})",
    )
