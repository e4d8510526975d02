"""PCA dimension reduction and condition-number analysis."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np

from rdapprox.constants import DEFAULT_DELTA, VARIANT_ALPHA_STAR, VARIANT_R0, VARIANT_R1
from rdapprox.errors import DegenerateSourceError, DimensionMismatchError, ParameterError
from rdapprox.linalg.spectral import (
    Spectrum,
    eigendecompose,
    estimate_covariance,
    spectrum_from_eigenvalues,
)
from rdapprox.rd.curve import distortion_grid, max_abs_error, rd_curve

logger = logging.getLogger(__name__)

# Relative slack when comparing cumulative eigenvalue mass against P * trace
_RATIO_SLACK = 1e-12


@dataclass(frozen=True)
class PCAModel:
    input_dim: int
    output_dim: int
    components: np.ndarray  # p x n, orthonormal columns
    component_eigenvalues: np.ndarray
    cumulative_variance_ratio: float
    mean_vector: np.ndarray
    total_variance: float

    @property
    def retained_condition_number(self) -> float:
        smallest = float(self.component_eigenvalues[-1])
        if smallest <= 0:
            return math.inf
        return float(self.component_eigenvalues[0]) / smallest


@dataclass(frozen=True)
class ConditionRow:
    dim: int
    ratio: float
    condition_number: float


def _dims_for_ratio(eigenvalues: np.ndarray, trace: float, ratio: float) -> int:
    cumulative = np.cumsum(eigenvalues)
    target = ratio * trace * (1.0 - _RATIO_SLACK)
    return int(np.searchsorted(cumulative, target, side="left")) + 1


def fit_pca(
    data: np.ndarray,
    target_dim: Optional[int] = None,
    target_ratio: Optional[float] = None,
    centered: bool = True,
) -> PCAModel:
    """Fit the top-n principal components of a p x m sample matrix.

    Exactly one of ``target_dim`` / ``target_ratio`` must be given. With a ratio, n is the
    smallest count whose cumulative eigenvalue mass reaches ``target_ratio * trace``.
    """
    if (target_dim is None) == (target_ratio is None):
        raise ParameterError("fit_pca needs exactly one of target_dim or target_ratio")
    samples = np.asarray(data, dtype=np.float64)
    cov = estimate_covariance(samples, centered=centered)
    p, m = samples.shape
    spectrum, vectors = eigendecompose(cov)
    if spectrum.trace <= 0:
        raise DegenerateSourceError()

    if target_dim is not None:
        limit = min(p, m - 1)
        if not 1 <= target_dim <= limit:
            raise ParameterError(f"target_dim must lie in [1, {limit}], got {target_dim}")
        n = int(target_dim)
    else:
        assert target_ratio is not None
        if not 0 < target_ratio <= 1:
            raise ParameterError(f"target_ratio must lie in (0, 1], got {target_ratio}")
        n = min(_dims_for_ratio(spectrum.eigenvalues, spectrum.trace, target_ratio), p)

    kept = spectrum.eigenvalues[:n].copy()
    mean = samples.mean(axis=1) if centered else np.zeros(p)
    model = PCAModel(
        input_dim=p,
        output_dim=n,
        components=np.ascontiguousarray(vectors[:, :n]),
        component_eigenvalues=kept,
        cumulative_variance_ratio=float(np.sum(kept)) / spectrum.trace,
        mean_vector=mean,
        total_variance=spectrum.trace,
    )
    logger.info(
        f"PCA {p} -> {n} dims, P = {model.cumulative_variance_ratio:.4f}, "
        f"kappa {spectrum.condition_number:.4g} -> {model.retained_condition_number:.4g}"
    )
    return model


def pca_transform(model: PCAModel, data: np.ndarray) -> np.ndarray:
    samples = np.asarray(data, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] != model.input_dim:
        rows = samples.shape[0] if samples.ndim >= 1 else 0
        raise DimensionMismatchError(model.input_dim, rows)
    return model.components.T @ (samples - model.mean_vector[:, None])


def retained_spectrum_condition(eigenvalues: np.ndarray, n: int) -> float:
    smallest = float(eigenvalues[n - 1])
    if smallest <= 0:
        return math.inf
    return float(eigenvalues[0]) / smallest


def default_sweep_dims(rank: int, count: int = 12) -> List[int]:
    if rank < 1:
        return []
    dims = np.unique(np.geomspace(1, rank, num=min(count, rank)).round().astype(int))
    return [int(d) for d in dims]


def condition_sweep(spectrum: Spectrum, dims: Iterable[int]) -> List[ConditionRow]:
    """Condition number of the top-n retained eigenvalues for every requested n."""
    if spectrum.trace <= 0:
        raise DegenerateSourceError()
    rows = []
    cumulative = np.cumsum(spectrum.eigenvalues)
    for n in sorted(set(int(d) for d in dims)):
        if not 1 <= n <= spectrum.dim:
            raise ParameterError(f"sweep dim {n} outside [1, {spectrum.dim}]")
        rows.append(
            ConditionRow(
                dim=n,
                ratio=float(cumulative[n - 1]) / spectrum.trace,
                condition_number=retained_spectrum_condition(spectrum.eigenvalues, n),
            )
        )
    return rows


@dataclass(frozen=True)
class ApproximationRow:
    dim: int
    condition_number: float
    alpha_star: float
    error_alpha_star: float
    error_r1: float
    error_r0: float


def approximation_error_sweep(
    spectrum: Spectrum,
    dims: Iterable[int],
    grid_points: int = 200,
    spacing: str = "log",
    floor_ratio: float = 1e-4,
    delta: float = DEFAULT_DELTA,
) -> List[ApproximationRow]:
    """Max |R_alpha - R| of the retained top-n spectrum for every requested n."""
    rows = []
    for n in sorted(set(int(d) for d in dims)):
        if not 1 <= n <= spectrum.dim:
            raise ParameterError(f"sweep dim {n} outside [1, {spectrum.dim}]")
        retained = spectrum_from_eigenvalues(spectrum.eigenvalues[:n])
        if retained.trace <= 0:
            raise DegenerateSourceError()
        grid = distortion_grid(retained.trace, grid_points, spacing, floor_ratio)
        curve = rd_curve(retained, grid, delta=delta)
        assert curve.alpha_star is not None
        rows.append(
            ApproximationRow(
                dim=n,
                condition_number=retained.condition_number,
                alpha_star=curve.alpha_star.alpha_star,
                error_alpha_star=max_abs_error(curve, VARIANT_ALPHA_STAR),
                error_r1=max_abs_error(curve, VARIANT_R1),
                error_r0=max_abs_error(curve, VARIANT_R0),
            )
        )
    return rows
