"""Numerical evaluation of the approximation-error bounds.

Every report carries the observed per-dimension error (R_alpha(D) - R(D)) / n next to the
lower and upper bound it is supposed to respect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from rdapprox.constants import DEFAULT_DELTA
from rdapprox.errors import DegenerateSourceError, ParameterError
from rdapprox.linalg.spectral import Spectrum, spectrum_from_eigenvalues
from rdapprox.rd.alpha import AlphaStarResult, find_alpha_star
from rdapprox.rd.approx import r_alpha
from rdapprox.rd.waterfill import exact_rate

SOURCE_THEOREM1 = "theorem1"
SOURCE_THEOREM2 = "theorem2"
SOURCE_COROLLARY1 = "corollary1"

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class BoundReport:
    distortion: float
    lower: float
    upper: float
    observed: float
    source: str
    alpha: float
    restricted: bool = False  # lambda_min taken over nonzero eigenvalues only

    def holds(self, slack: float = BOUND_SLACK) -> bool:
        return self.lower - slack <= self.observed <= self.upper + slack


def _check(spectrum: Spectrum, distortion: float) -> None:
    if spectrum.trace <= 0:
        raise DegenerateSourceError()
    if not 0 < distortion <= spectrum.trace * (1.0 + 1e-12):
        raise ParameterError(f"distortion must lie in (0, {spectrum.trace}], got {distortion}")


def _lambda_min(spectrum: Spectrum) -> tuple[float, bool]:
    if spectrum.is_singular:
        return spectrum.lambda_min_nonzero, True
    return spectrum.lambda_min, False


def observed_error(spectrum: Spectrum, alpha: float, distortion: float) -> float:
    """(R_alpha(D) - R(D)) / n."""
    return (r_alpha(spectrum, alpha, distortion) - exact_rate(spectrum, distortion).rate) / (
        spectrum.dim
    )


def _bracket(lower: float, upper: float, restricted: bool) -> tuple[float, float]:
    # A restricted lambda_min above lambda_mean inverts the closed form
    if restricted and not lower <= upper:
        return -math.inf, math.inf
    return lower, upper


def theorem1_bounds(spectrum: Spectrum, alpha: float, distortion: float) -> BoundReport:
    _check(spectrum, distortion)
    lam_min, restricted = _lambda_min(spectrum)
    upper = 0.5 * math.log1p(alpha)
    # D <= tr = n lambda_mean, so the second branch implies lambda_min < lambda_mean
    if distortion <= spectrum.dim * lam_min:
        lower = 0.0
    else:
        lower = upper - 0.5 * math.log(spectrum.lambda_mean / lam_min)
    return BoundReport(
        distortion=distortion,
        lower=lower,
        upper=upper,
        observed=observed_error(spectrum, alpha, distortion),
        source=SOURCE_THEOREM1,
        alpha=alpha,
        restricted=restricted,
    )


def _alpha_star(
    spectrum: Spectrum, alpha_result: Optional[AlphaStarResult], delta: float
) -> AlphaStarResult:
    return alpha_result if alpha_result is not None else find_alpha_star(spectrum, delta)


def theorem2_bounds(
    spectrum: Spectrum,
    distortion: float,
    alpha_result: Optional[AlphaStarResult] = None,
    delta: float = DEFAULT_DELTA,
) -> BoundReport:
    _check(spectrum, distortion)
    lam_min, restricted = _lambda_min(spectrum)
    ratio = lam_min / spectrum.lambda_mean
    upper = 0.5 * math.log(2.0 - ratio) if ratio < 2.0 else -math.inf
    lower, upper = _bracket(0.5 * math.log(ratio), upper, restricted)
    alpha = _alpha_star(spectrum, alpha_result, delta).alpha_star
    return BoundReport(
        distortion=distortion,
        lower=lower,
        upper=upper,
        observed=observed_error(spectrum, alpha, distortion),
        source=SOURCE_THEOREM2,
        alpha=alpha,
        restricted=restricted,
    )


def corollary1_bounds(
    spectrum: Spectrum,
    distortion: float,
    alpha_result: Optional[AlphaStarResult] = None,
    delta: float = DEFAULT_DELTA,
) -> BoundReport:
    _check(spectrum, distortion)
    kappa = spectrum.condition_number
    if math.isinf(kappa):
        lower, upper = -math.inf, 0.5 * math.log(2.0)
    else:
        lower, upper = 0.5 * math.log(1.0 / kappa), 0.5 * math.log(2.0 - 1.0 / kappa)
    alpha = _alpha_star(spectrum, alpha_result, delta).alpha_star
    return BoundReport(
        distortion=distortion,
        lower=lower,
        upper=upper,
        observed=observed_error(spectrum, alpha, distortion),
        source=SOURCE_COROLLARY1,
        alpha=alpha,
    )


def random_spectrum(
    rng: np.random.Generator, max_dim: int = 20, singular: bool = False
) -> Spectrum:
    """Random spectrum with log-uniform eigenvalues in [1e-2, 1e2]."""
    dim = int(rng.integers(1, max_dim + 1))
    values = 10.0 ** rng.uniform(-2.0, 2.0, size=dim)
    if singular and dim > 1:
        zeros = int(rng.integers(1, dim))
        values[:zeros] = 0.0
    return spectrum_from_eigenvalues(values)
