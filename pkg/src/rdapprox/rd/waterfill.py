"""Reverse water-filling and the exact Gaussian RD function."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from rdapprox.errors import DegenerateSourceError, ParameterError
from rdapprox.linalg.spectral import Spectrum

# D within this relative distance above the trace is treated as the trace itself
_TRACE_SLACK = 1e-12


@dataclass(frozen=True)
class RDPoint:
    distortion: float
    rate: float  # nats


@dataclass(frozen=True)
class WaterFillSolution:
    water_level: float
    distortions: np.ndarray  # aligned with spectrum.eigenvalues
    active_set: Tuple[int, ...]  # indices with L < lambda_i


def _check_distortion(distortion: float) -> float:
    d = float(distortion)
    if not d > 0 or not math.isfinite(d):
        raise ParameterError(f"distortion must be a positive finite number, got {distortion}")
    return d


def water_level(spectrum: Spectrum, distortion: float) -> WaterFillSolution:
    """Solve sum_i min(L, lambda_i) = D exactly.

    The nonzero eigenvalues are sorted ascending; between consecutive breakpoints the
    left-hand side is linear in L, so the segment containing D is found with a prefix-sum
    search and solved in closed form.
    """
    d = _check_distortion(distortion)
    if spectrum.rank == 0:
        raise DegenerateSourceError()
    if d > spectrum.trace * (1.0 + _TRACE_SLACK):
        raise ParameterError(f"distortion {d} exceeds the trace {spectrum.trace}")
    d = min(d, spectrum.trace)

    ascending = spectrum.nonzero[::-1]
    count = ascending.size
    prefix = np.concatenate(([0.0], np.cumsum(ascending)[:-1]))
    remaining = count - np.arange(count)
    # Value of sum_i min(L, lambda_i) when L sits on each breakpoint
    breakpoints = prefix + remaining * ascending
    segment = min(int(np.searchsorted(breakpoints, d, side="left")), count - 1)
    level = (d - float(prefix[segment])) / float(remaining[segment])

    distortions = np.minimum(level, spectrum.eigenvalues)
    active = tuple(int(i) for i in np.flatnonzero(level < spectrum.eigenvalues))
    return WaterFillSolution(water_level=level, distortions=distortions, active_set=active)


def exact_rate(spectrum: Spectrum, distortion: float) -> RDPoint:
    """R(D) = sum over nonzero eigenvalues of 1/2 log(lambda_i / D_i), in nats."""
    d = _check_distortion(distortion)
    if spectrum.rank == 0:
        raise DegenerateSourceError()
    if d >= spectrum.trace:
        return RDPoint(distortion=d, rate=0.0)
    solution = water_level(spectrum, d)
    lam = spectrum.nonzero
    per_component = solution.distortions[: spectrum.rank]
    rate = 0.5 * float(np.sum(np.log(lam / per_component)))
    return RDPoint(distortion=d, rate=max(rate, 0.0))
