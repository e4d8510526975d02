import math

import numpy as np
import pytest
import torch

from rdapprox.errors import EmptyClassError, ParameterError
from rdapprox.redunet.classifier import (
    accuracy_report,
    cosine_similarity_report,
    fit_subspace_bases,
    ns_classify,
    subspace_residuals,
)
from rdapprox.redunet.layers import DTYPE


def _axis(n: int, *indices: int) -> torch.Tensor:
    return torch.eye(n, dtype=DTYPE)[:, list(indices)]


def test_vector_in_a_class_span_is_assigned_to_it():
    bases = [_axis(4, 0), _axis(4, 1, 2)]
    z = torch.tensor([[0.0], [0.6], [0.8], [0.0]], dtype=DTYPE)
    residuals = subspace_residuals(bases, z)
    assert float(residuals[1, 0]) == pytest.approx(0.0, abs=1e-15)
    assert ns_classify(bases, z).tolist() == [1]


def test_ties_go_to_the_lowest_class_index():
    bases = [_axis(2, 0), _axis(2, 1)]
    z = torch.tensor([[1.0], [1.0]], dtype=DTYPE) / math.sqrt(2.0)
    assert ns_classify(bases, z).tolist() == [0]


def test_subspace_rank_follows_the_energy_threshold():
    rng = np.random.default_rng(0)
    plane = np.zeros((5, 30))
    plane[:2] = rng.standard_normal((2, 30))
    plane[2:] = 1e-4 * rng.standard_normal((3, 30))
    z = torch.from_numpy(plane)
    [basis] = fit_subspace_bases(z, [0] * 30, 1, energy_threshold=0.95)
    assert basis.shape == (5, 2)
    torch.testing.assert_close(basis.T @ basis, torch.eye(2, dtype=DTYPE))
    [fixed] = fit_subspace_bases(z, [0] * 30, 1, rank=1)
    assert fixed.shape == (5, 1)


def test_missing_class_cannot_be_fitted():
    z = torch.eye(3, dtype=DTYPE)
    with pytest.raises(EmptyClassError):
        fit_subspace_bases(z, [0, 0, 0], 2)


def test_accuracy_report_per_class():
    report = accuracy_report([0, 1, 1, 0], [0, 1, 0, 0], class_count=3)
    assert report.overall == pytest.approx(0.75)
    assert report.per_class[0] == pytest.approx(2 / 3)
    assert report.per_class[1] == 1.0
    assert math.isnan(report.per_class[2])
    assert report.sample_count == 4
    with pytest.raises(ParameterError):
        accuracy_report([], [])


def test_cosine_report_for_identical_and_orthogonal_classes():
    z = torch.tensor([[1.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 1.0]], dtype=DTYPE)
    report = cosine_similarity_report(z, [0, 0, 1, 1])
    np.testing.assert_allclose(report.class_pair_means, [[1.0, 0.0], [0.0, 1.0]])
    assert tuple(report.similarity.shape) == (4, 4)
