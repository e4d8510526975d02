import math

import numpy as np
import pytest

from rdapprox.constants import VARIANT_ALPHA_STAR, VARIANT_EXACT, VARIANT_R0, VARIANT_R1
from rdapprox.errors import ParameterError
from rdapprox.linalg.spectral import spectrum_from_eigenvalues
from rdapprox.rd.bounds import random_spectrum
from rdapprox.rd.curve import distortion_grid, max_abs_error, rd_curve

FIG_A = [1.0 - 0.1 * i for i in range(10)]
FIG_B = [2.0 ** (10 - i) / 10 for i in range(1, 11)]


def test_log_grid_ends_exactly_at_the_trace():
    grid = distortion_grid(5.5, 200)
    assert grid.size == 200
    assert grid[-1] == 5.5
    assert grid[0] == pytest.approx(5.5e-4)
    assert np.all(np.diff(grid) > 0)


def test_linear_grid_starts_above_zero():
    grid = distortion_grid(2.0, 4, spacing="linear")
    np.testing.assert_allclose(grid, [0.5, 1.0, 1.5, 2.0])


def test_unknown_spacing_is_rejected():
    with pytest.raises(ParameterError):
        distortion_grid(1.0, 10, spacing="cubic")


def test_curve_table_shape():
    spectrum = spectrum_from_eigenvalues(FIG_A)
    curve = rd_curve(spectrum, distortion_grid(spectrum.trace, 200))
    rows = curve.rows()
    assert len(rows) == 200
    assert all(len(row) == 5 for row in rows)
    assert list(curve.columns) == [VARIANT_EXACT, VARIANT_R0, VARIANT_R1, VARIANT_ALPHA_STAR]
    assert curve.columns[VARIANT_EXACT][-1] == 0.0


@pytest.mark.parametrize("eigenvalues", [FIG_A, FIG_B])
def test_alpha_star_beats_both_anchors(eigenvalues: list[float]):
    spectrum = spectrum_from_eigenvalues(eigenvalues)
    curve = rd_curve(spectrum, distortion_grid(spectrum.trace, 200))
    best = max_abs_error(curve, VARIANT_ALPHA_STAR)
    assert best < max_abs_error(curve, VARIANT_R1)
    assert best < max_abs_error(curve, VARIANT_R0)


@pytest.mark.parametrize("rank", range(1, 10))
def test_singular_spectra(rank: int):
    eigenvalues = [2.0 ** (10 - i) / 10 if i <= rank else 0.0 for i in range(1, 11)]
    spectrum = spectrum_from_eigenvalues(eigenvalues)
    curve = rd_curve(spectrum, distortion_grid(spectrum.trace, 200))
    assert VARIANT_R0 in curve.diverged
    assert max_abs_error(curve, VARIANT_R0) == math.inf
    assert max_abs_error(curve, VARIANT_ALPHA_STAR) < max_abs_error(curve, VARIANT_R1)


def test_scalar_source_is_exact():
    spectrum = spectrum_from_eigenvalues([5.0])
    curve = rd_curve(spectrum, distortion_grid(5.0, 50))
    assert max_abs_error(curve, VARIANT_R0) < 1e-9
    assert max_abs_error(curve, VARIANT_ALPHA_STAR) < 1e-9


def test_grid_beyond_trace_is_rejected():
    spectrum = spectrum_from_eigenvalues(FIG_A)
    with pytest.raises(ParameterError):
        rd_curve(spectrum, [1.0, 6.0])


@pytest.mark.parametrize("singular", [False, True])
@pytest.mark.parametrize("spacing", ["log", "linear"])
def test_rates_do_not_increase_with_distortion(singular: bool, spacing: str):
    rng = np.random.default_rng(17 + int(singular))
    for _ in range(50):
        spectrum = random_spectrum(rng, singular=singular)
        curve = rd_curve(spectrum, distortion_grid(spectrum.trace, 100, spacing=spacing))
        for name, column in curve.columns.items():
            if name in curve.diverged:
                assert np.all(column == -math.inf)
                continue
            assert np.all(np.diff(column) <= 1e-12 * (1.0 + np.abs(column[:-1])))
        assert curve.columns[VARIANT_EXACT][-1] == 0.0
