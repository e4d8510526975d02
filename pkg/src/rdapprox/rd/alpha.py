"""Selection of alpha* by bisection, plus the anchor-point diagnostic."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from rdapprox.constants import DEFAULT_DELTA, DEFAULT_MAX_ITERATIONS
from rdapprox.errors import AlphaSearchError, DegenerateSourceError, ParameterError
from rdapprox.linalg.spectral import Spectrum
from rdapprox.rd.approx import r_alpha
from rdapprox.rd.waterfill import exact_rate

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AlphaStarResult:
    alpha_star: float
    residual: float  # |R_alpha*(tr Sigma)|
    iterations: int
    delta: float
    bracket: Tuple[float, float]


@dataclass(frozen=True)
class AnchorDiagnostic:
    alpha_star: float
    alpha_star_error: float
    best_grid_alpha: float
    best_grid_error: float


def alpha_upper_bound(spectrum: Spectrum) -> float:
    """1 - lambda_min / lambda_mean; lambda_min over nonzero eigenvalues when singular."""
    if spectrum.trace <= 0:
        raise DegenerateSourceError()
    lam_min = spectrum.lambda_min if not spectrum.is_singular else 0.0
    return 1.0 - lam_min / spectrum.lambda_mean


def find_alpha_star(
    spectrum: Spectrum,
    delta: float = DEFAULT_DELTA,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> AlphaStarResult:
    """Bisect alpha in [0, 1] until |R_alpha(tr Sigma)| <= delta.

    R_alpha(tr Sigma) is strictly increasing in alpha, non-positive at 0 and positive at 1,
    so the root is unique. The residual is tested at each midpoint before the bracket is
    halved.
    """
    if not delta > 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    if max_iterations < 1:
        raise ParameterError("max_iterations must be at least 1")
    if spectrum.trace <= 0:
        raise DegenerateSourceError()
    trace = spectrum.trace

    at_zero = r_alpha(spectrum, 0.0, trace)
    if abs(at_zero) <= delta:
        return AlphaStarResult(
            alpha_star=0.0, residual=abs(at_zero), iterations=0, delta=delta, bracket=(0.0, 0.0)
        )

    low, high = 0.0, 1.0
    best_alpha, best_residual = 0.0, abs(at_zero)
    for iteration in range(1, max_iterations + 1):
        mid = 0.5 * (low + high)
        value = r_alpha(spectrum, mid, trace)
        if abs(value) < best_residual:
            best_alpha, best_residual = mid, abs(value)
        if abs(value) <= delta:
            logger.debug(f"alpha* = {mid!r} after {iteration} iterations")
            return AlphaStarResult(
                alpha_star=mid,
                residual=abs(value),
                iterations=iteration,
                delta=delta,
                bracket=(low, high),
            )
        if value < 0:
            low = mid
        else:
            high = mid
    logger.warning(f"alpha bisection stalled near {best_alpha!r} (residual {best_residual:.3e})")
    raise AlphaSearchError((low, high), best_residual, max_iterations)


def anchor_average_error(spectrum: Spectrum, alpha: float) -> float:
    """1/2 |R_a(n lambda_min) - R(n lambda_min)| + 1/2 |R_a(tr) - R(tr)|."""
    lam_min = spectrum.lambda_min_nonzero
    if lam_min <= 0:
        raise DegenerateSourceError()
    total = 0.0
    for d in (spectrum.dim * lam_min, spectrum.trace):
        d = min(d, spectrum.trace)
        total += 0.5 * abs(r_alpha(spectrum, alpha, d) - exact_rate(spectrum, d).rate)
    return total


def anchor_diagnostic(
    spectrum: Spectrum, delta: float = DEFAULT_DELTA, grid_points: int = 1001
) -> AnchorDiagnostic:
    """Compare alpha* against the grid minimiser of the anchor-point error (reported only)."""
    result = find_alpha_star(spectrum, delta)
    best_alpha, best_error = 0.0, math.inf
    for alpha in np.linspace(0.0, 1.0, grid_points):
        error = anchor_average_error(spectrum, float(alpha))
        if error < best_error:
            best_alpha, best_error = float(alpha), error
    return AnchorDiagnostic(
        alpha_star=result.alpha_star,
        alpha_star_error=anchor_average_error(spectrum, result.alpha_star),
        best_grid_alpha=best_alpha,
        best_grid_error=best_error,
    )
