import math

import numpy as np
import pytest

from rdapprox.errors import AlphaSearchError, ParameterError
from rdapprox.linalg.spectral import spectrum_from_eigenvalues
from rdapprox.rd.alpha import (
    alpha_upper_bound,
    anchor_diagnostic,
    find_alpha_star,
)
from rdapprox.rd.approx import r0, r1, r_alpha
from rdapprox.rd.bounds import random_spectrum

FIG_A = [1.0 - 0.1 * i for i in range(10)]


def _polynomial_alpha(eigenvalues: list[float]) -> float:
    # Root of prod_i (alpha + lambda_i / lambda_mean) = 1 inside [0, 1]
    values = np.asarray(eigenvalues)
    coefficients = np.poly(-values / values.mean())
    coefficients[-1] -= 1.0
    roots = np.roots(coefficients)
    real = roots[np.abs(roots.imag) < 1e-9].real
    inside = real[(real >= -1e-12) & (real <= 1.0)]
    assert inside.size == 1
    return float(inside[0])


def test_identity_covariance_rate():
    spectrum = spectrum_from_eigenvalues([1.0, 1.0])
    assert r_alpha(spectrum, 1.0, 2.0) == pytest.approx(math.log(2.0))
    assert r1(spectrum, 2.0) == pytest.approx(math.log(2.0))
    assert r0(spectrum, 2.0) == pytest.approx(0.0)


def test_singular_spectrum_diverges_only_at_zero_alpha():
    spectrum = spectrum_from_eigenvalues([1.0, 0.0])
    assert r_alpha(spectrum, 0.0, 0.5) == -math.inf
    assert r0(spectrum, 0.5) == -math.inf
    assert math.isfinite(r_alpha(spectrum, 0.5, 0.5))


def test_alpha_and_distortion_are_validated():
    spectrum = spectrum_from_eigenvalues([1.0, 0.5])
    with pytest.raises(ParameterError):
        r_alpha(spectrum, 1.5, 1.0)
    with pytest.raises(ParameterError):
        r_alpha(spectrum, 0.5, 0.0)


def test_isotropic_and_scalar_sources_need_no_regularizer():
    assert find_alpha_star(spectrum_from_eigenvalues([0.1] * 3)).alpha_star == 0.0
    result = find_alpha_star(spectrum_from_eigenvalues([4.0]))
    assert result.alpha_star == 0.0
    assert result.iterations == 0


def test_alpha_star_on_linear_spectrum():
    spectrum = spectrum_from_eigenvalues(FIG_A)
    result = find_alpha_star(spectrum, delta=1e-8)
    assert result.residual <= 1e-8
    assert result.iterations <= 60
    assert 0.0 < result.alpha_star <= alpha_upper_bound(spectrum)
    assert alpha_upper_bound(spectrum) == pytest.approx(1.0 - 0.1 / 0.55)
    assert result.alpha_star == pytest.approx(_polynomial_alpha(FIG_A), abs=1e-7)
    assert abs(r_alpha(spectrum, result.alpha_star, spectrum.trace)) <= 1e-8


def test_alpha_star_on_doubling_spectrum():
    eigenvalues = [2.0 ** (10 - i) / 10 for i in range(1, 11)]
    result = find_alpha_star(spectrum_from_eigenvalues(eigenvalues))
    assert result.alpha_star == pytest.approx(_polynomial_alpha(eigenvalues), abs=1e-7)


def test_delta_must_be_positive():
    with pytest.raises(ParameterError):
        find_alpha_star(spectrum_from_eigenvalues(FIG_A), delta=0.0)


def test_iteration_cap_reports_the_bracket():
    with pytest.raises(AlphaSearchError) as info:
        find_alpha_star(spectrum_from_eigenvalues(FIG_A), delta=1e-15, max_iterations=1)
    assert info.value.bracket == (0.0, 0.5)
    assert info.value.iterations == 1


def test_rate_at_trace_increases_with_alpha():
    rng = np.random.default_rng(11)
    alphas = np.linspace(0.0, 1.0, 101)
    for _ in range(200):
        spectrum = random_spectrum(rng)
        values = [r_alpha(spectrum, float(a), spectrum.trace) for a in alphas]
        assert np.all(np.diff(values) > 0)
        assert values[0] <= 1e-12
        assert values[-1] > 0


def test_alpha_star_stays_below_its_upper_bound():
    rng = np.random.default_rng(5)
    for _ in range(200):
        spectrum = random_spectrum(rng, singular=True)
        result = find_alpha_star(spectrum)
        assert result.alpha_star <= alpha_upper_bound(spectrum) + 2 * result.delta + 1e-9


def test_anchor_diagnostic_is_bounded():
    diagnostic = anchor_diagnostic(spectrum_from_eigenvalues(FIG_A), grid_points=101)
    assert 0.0 <= diagnostic.best_grid_alpha <= 1.0
    assert diagnostic.best_grid_error >= 0.0
    assert diagnostic.alpha_star_error >= 0.0
