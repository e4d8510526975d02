"""The R_alpha approximation family."""

from __future__ import annotations

import math

import numpy as np

from rdapprox.errors import ParameterError
from rdapprox.linalg.spectral import Spectrum


def _validate(alpha: float, distortion: float) -> None:
    if not 0.0 <= alpha <= 1.0:
        raise ParameterError(f"alpha must lie in [0, 1], got {alpha}")
    if not distortion > 0 or not math.isfinite(distortion):
        raise ParameterError(f"distortion must be a positive finite number, got {distortion}")


def r_alpha(spectrum: Spectrum, alpha: float, distortion: float) -> float:
    """1/2 sum_i log(alpha + n lambda_i / D) over all n eigenvalues.

    Zero eigenvalues contribute 1/2 log(alpha); with alpha = 0 the value is -inf.
    """
    _validate(alpha, distortion)
    scaled = alpha + spectrum.dim * spectrum.eigenvalues / distortion
    if alpha == 0.0 and spectrum.is_singular:
        return -math.inf
    return 0.5 * float(np.sum(np.log(scaled)))


def r0(spectrum: Spectrum, distortion: float) -> float:
    """1/2 log det((n/D) Sigma); the small-distortion underestimate."""
    return r_alpha(spectrum, 0.0, distortion)


def r1(spectrum: Spectrum, distortion: float) -> float:
    """1/2 log det(I + (n/D) Sigma); the coding-rate form used by ReduNet."""
    return r_alpha(spectrum, 1.0, distortion)
