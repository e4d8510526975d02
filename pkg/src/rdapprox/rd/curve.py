"""RD curve tables: exact R(D) next to R_0, R_1 and R_alpha*."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from rdapprox.constants import (
    DEFAULT_DELTA,
    DEFAULT_MAX_ITERATIONS,
    VARIANT_ALPHA_STAR,
    VARIANT_EXACT,
    VARIANT_R0,
    VARIANT_R1,
    VARIANTS,
)
from rdapprox.errors import DegenerateSourceError, ParameterError
from rdapprox.linalg.spectral import Spectrum
from rdapprox.rd.alpha import AlphaStarResult, find_alpha_star
from rdapprox.rd.approx import r_alpha
from rdapprox.rd.waterfill import exact_rate


@dataclass(frozen=True)
class RDCurve:
    grid: np.ndarray
    columns: Dict[str, np.ndarray]
    alpha_star: Optional[AlphaStarResult] = None
    diverged: frozenset[str] = field(default_factory=frozenset)

    def rows(self) -> List[List[float]]:
        names = list(self.columns)
        return [
            [float(self.grid[i])] + [float(self.columns[name][i]) for name in names]
            for i in range(self.grid.size)
        ]


def distortion_grid(
    trace: float, points: int = 200, spacing: str = "log", floor_ratio: float = 1e-4
) -> np.ndarray:
    """Grid in (0, trace]; the last point is always the trace itself."""
    if not trace > 0:
        raise DegenerateSourceError()
    if points < 1:
        raise ParameterError("grid needs at least one point")
    if spacing == "log":
        if not 0 < floor_ratio < 1:
            raise ParameterError("floor_ratio must lie in (0, 1)")
        grid = np.geomspace(floor_ratio * trace, trace, num=points)
    elif spacing == "linear":
        grid = np.linspace(trace / points, trace, num=points)
    else:
        raise ParameterError(f"unknown grid spacing {spacing!r}")
    grid[-1] = trace
    return grid


def rd_curve(
    spectrum: Spectrum,
    grid: Sequence[float] | np.ndarray,
    variants: Iterable[str] = VARIANTS,
    delta: float = DEFAULT_DELTA,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> RDCurve:
    """Evaluate the requested variants on every grid point; alpha* is solved once."""
    points = np.asarray(grid, dtype=np.float64).ravel()
    if points.size == 0:
        raise ParameterError("grid must not be empty")
    if spectrum.trace <= 0:
        raise DegenerateSourceError()
    if np.any(points <= 0) or np.any(points > spectrum.trace * (1.0 + 1e-12)):
        raise ParameterError(f"grid values must lie in (0, {spectrum.trace}]")
    requested = [name for name in VARIANTS if name in set(variants)]
    unknown = set(variants) - set(VARIANTS)
    if unknown:
        raise ParameterError(f"unknown variants: {', '.join(sorted(unknown))}")

    alpha_result = None
    if VARIANT_ALPHA_STAR in requested:
        alpha_result = find_alpha_star(spectrum, delta, max_iterations)
    alphas = {
        VARIANT_R0: 0.0,
        VARIANT_R1: 1.0,
        VARIANT_ALPHA_STAR: alpha_result.alpha_star if alpha_result else None,
    }

    columns: Dict[str, np.ndarray] = {}
    diverged = set()
    for name in requested:
        if name == VARIANT_EXACT:
            values = [exact_rate(spectrum, float(d)).rate for d in points]
        else:
            alpha = alphas[name]
            assert alpha is not None
            values = [r_alpha(spectrum, alpha, float(d)) for d in points]
        column = np.array(values, dtype=np.float64)
        if np.any(np.isinf(column)):
            diverged.add(name)
        columns[name] = column
    return RDCurve(
        grid=points, columns=columns, alpha_star=alpha_result, diverged=frozenset(diverged)
    )


def max_abs_error(curve: RDCurve, variant: str) -> float:
    """max_D |variant(D) - R(D)|; +inf once the variant diverged anywhere on the grid."""
    if VARIANT_EXACT not in curve.columns or variant not in curve.columns:
        raise ParameterError(f"curve lacks {VARIANT_EXACT} or {variant}")
    if variant in curve.diverged:
        return math.inf
    return float(np.max(np.abs(curve.columns[variant] - curve.columns[VARIANT_EXACT])))
