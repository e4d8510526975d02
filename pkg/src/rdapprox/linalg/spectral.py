"""Covariance estimation and symmetric eigendecomposition."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from rdapprox.constants import PSD_SLACK, RANK_TOLERANCE, SYMMETRY_TOLERANCE
from rdapprox.errors import (
    InsufficientSamplesError,
    NotPositiveSemidefiniteError,
    NotSymmetricError,
    ParameterError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CovarianceMatrix:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])


@dataclass(frozen=True)
class Spectrum:
    """Descending eigenvalues of a covariance matrix and derived statistics."""

    eigenvalues: np.ndarray
    trace: float
    lambda_min: float
    lambda_max: float
    lambda_mean: float
    rank: int
    condition_number: float
    rank_tolerance: float = RANK_TOLERANCE

    @property
    def dim(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def is_singular(self) -> bool:
        return self.rank < self.dim

    @property
    def nonzero(self) -> np.ndarray:
        return self.eigenvalues[: self.rank]

    @property
    def lambda_min_nonzero(self) -> float:
        """Smallest eigenvalue above the rank tolerance (0.0 for an all-zero spectrum)."""
        if self.rank == 0:
            return 0.0
        return float(self.eigenvalues[self.rank - 1])


def as_covariance(matrix: np.ndarray) -> CovarianceMatrix:
    """Validate a square symmetric matrix and wrap it."""
    entries = np.asarray(matrix, dtype=np.float64)
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise ParameterError(f"covariance must be square, got shape {entries.shape}")
    if entries.shape[0] == 0:
        raise ParameterError("covariance must have at least one row")
    if not np.all(np.isfinite(entries)):
        raise ParameterError("covariance has non-finite entries")
    deviation = float(np.max(np.abs(entries - entries.T)))
    if deviation > SYMMETRY_TOLERANCE:
        raise NotSymmetricError(deviation)
    return CovarianceMatrix(entries=0.5 * (entries + entries.T))


def spectrum_from_eigenvalues(
    values: Sequence[float] | np.ndarray, rank_tolerance: float = RANK_TOLERANCE
) -> Spectrum:
    """Build a Spectrum: clamp rounding negatives, sort descending, zero sub-tolerance values."""
    eig = np.array(values, dtype=np.float64).ravel()
    if eig.size == 0:
        raise ParameterError("spectrum needs at least one eigenvalue")
    if not np.all(np.isfinite(eig)):
        raise ParameterError("spectrum has non-finite eigenvalues")
    lam_max = float(np.max(eig))
    floor = -PSD_SLACK * max(lam_max, 0.0)
    if np.any(eig < floor):
        raise NotPositiveSemidefiniteError(
            f"eigenvalue {float(np.min(eig)):.3e} below PSD slack {floor:.3e}"
        )
    eig = np.sort(np.clip(eig, 0.0, None))[::-1].copy()
    lam_max = float(eig[0])
    eig[eig <= rank_tolerance * lam_max] = 0.0
    rank = int(np.count_nonzero(eig))
    trace = float(np.sum(eig))
    lam_min = float(eig[-1])
    if lam_max > 0 and lam_min > rank_tolerance * lam_max:
        kappa = lam_max / lam_min
    else:
        kappa = math.inf
    return Spectrum(
        eigenvalues=eig,
        trace=trace,
        lambda_min=lam_min,
        lambda_max=lam_max,
        lambda_mean=trace / eig.size,
        rank=rank,
        condition_number=kappa,
        rank_tolerance=rank_tolerance,
    )


def estimate_covariance(data: np.ndarray, centered: bool = True) -> CovarianceMatrix:
    """Unbiased sample covariance of a p x m matrix whose columns are samples."""
    samples = np.asarray(data, dtype=np.float64)
    if samples.ndim != 2:
        raise ParameterError(f"data must be a p x m matrix, got shape {samples.shape}")
    m = samples.shape[1]
    if m < 2:
        raise InsufficientSamplesError(m)
    if centered:
        samples = samples - samples.mean(axis=1, keepdims=True)
    cov = samples @ samples.T / (m - 1)
    return CovarianceMatrix(entries=0.5 * (cov + cov.T))


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of every column is made positive
    pivots = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def eigendecompose(cov: CovarianceMatrix | np.ndarray) -> Tuple[Spectrum, np.ndarray]:
    """Return the spectrum and the matching orthonormal eigenvectors (as columns)."""
    if not isinstance(cov, CovarianceMatrix):
        cov = as_covariance(cov)
    else:
        deviation = float(np.max(np.abs(cov.entries - cov.entries.T)))
        if deviation > SYMMETRY_TOLERANCE:
            raise NotSymmetricError(deviation)
    values, vectors = np.linalg.eigh(cov.entries)
    order = np.argsort(values, kind="stable")[::-1]
    spectrum = spectrum_from_eigenvalues(values[order])
    vectors = _fix_signs(vectors[:, order])
    logger.debug(
        f"Eigendecomposed {cov.dim}x{cov.dim} covariance: rank {spectrum.rank}, "
        f"kappa {spectrum.condition_number:.4g}"
    )
    return spectrum, vectors
