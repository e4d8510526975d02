import math

import numpy as np
import pytest

from rdapprox.errors import (
    InsufficientSamplesError,
    NotPositiveSemidefiniteError,
    NotSymmetricError,
)
from rdapprox.linalg.spectral import (
    as_covariance,
    eigendecompose,
    estimate_covariance,
    spectrum_from_eigenvalues,
)


def test_spectrum_sorts_descending_and_reports_condition_number():
    spectrum = spectrum_from_eigenvalues([0.1, 1.0, 0.5])
    np.testing.assert_array_equal(spectrum.eigenvalues, [1.0, 0.5, 0.1])
    assert spectrum.trace == pytest.approx(1.6)
    assert spectrum.lambda_mean == pytest.approx(1.6 / 3)
    assert spectrum.condition_number == pytest.approx(10.0)
    assert spectrum.rank == 3
    assert not spectrum.is_singular


def test_rounding_negatives_are_clamped_to_zero():
    spectrum = spectrum_from_eigenvalues([1.0, -1e-12])
    np.testing.assert_array_equal(spectrum.eigenvalues, [1.0, 0.0])
    assert spectrum.rank == 1
    assert spectrum.is_singular
    assert math.isinf(spectrum.condition_number)
    assert spectrum.lambda_min_nonzero == 1.0


def test_clearly_negative_eigenvalue_is_rejected():
    with pytest.raises(NotPositiveSemidefiniteError):
        spectrum_from_eigenvalues([1.0, -0.1])


def test_asymmetric_matrix_is_rejected():
    with pytest.raises(NotSymmetricError):
        as_covariance(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_covariance_needs_two_samples():
    with pytest.raises(InsufficientSamplesError):
        estimate_covariance(np.ones((3, 1)))


def test_estimate_covariance_matches_numpy():
    rng = np.random.default_rng(3)
    data = rng.standard_normal((4, 50))
    cov = estimate_covariance(data)
    np.testing.assert_allclose(cov.entries, np.cov(data), rtol=1e-12, atol=1e-14)


def test_eigendecompose_reconstructs_the_matrix():
    rng = np.random.default_rng(7)
    a = rng.standard_normal((6, 6))
    matrix = a @ a.T
    spectrum, vectors = eigendecompose(matrix)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(6), atol=1e-12)
    rebuilt = vectors @ np.diag(spectrum.eigenvalues) @ vectors.T
    np.testing.assert_allclose(rebuilt, matrix, rtol=1e-10, atol=1e-10)
    assert np.all(np.diff(spectrum.eigenvalues) <= 0)


def test_eigenvector_signs_are_deterministic():
    spectrum, vectors = eigendecompose(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(spectrum.eigenvalues, [3.0, 2.0, 1.0])
    np.testing.assert_allclose(vectors, np.eye(3)[:, [0, 2, 1]])


def test_eigendecompose_reconstructs_random_psd_matrices():
    rng = np.random.default_rng(11)
    for trial in range(200):
        n = int(rng.integers(1, 13))
        rank = int(rng.integers(0, n + 1)) if trial % 2 else n
        factor = rng.standard_normal((n, max(rank, 1))) * (rank > 0)
        matrix = factor @ factor.T
        matrix = 0.5 * (matrix + matrix.T)
        if not np.any(matrix):
            continue
        spectrum, vectors = eigendecompose(matrix)
        np.testing.assert_allclose(vectors.T @ vectors, np.eye(n), atol=1e-10)
        rebuilt = vectors @ np.diag(spectrum.eigenvalues) @ vectors.T
        assert np.max(np.abs(rebuilt - matrix)) <= 1e-8 * spectrum.lambda_max
        assert spectrum.rank <= max(rank, 1)
        assert np.all(np.diff(spectrum.eigenvalues) <= 0)
