import numpy as np
import pytest

from rdapprox.config import SyntheticConfig
from rdapprox.errors import ParameterError
from rdapprox.io.dataset import select_classes, split_per_class
from rdapprox.io.synthetic import generate_synthetic
from rdapprox.redunet.classifier import accuracy_report, fit_subspace_bases, ns_classify
from rdapprox.redunet.layers import init_features


def test_noiseless_one_dim_classes_are_rank_one():
    settings = SyntheticConfig(
        class_count=2, dim=4, subspace_dim=1, train_per_class=5, test_per_class=0, noise=0.0
    )
    dataset = generate_synthetic(settings)
    assert dataset.samples.shape == (4, 10)
    for t in range(2):
        block = dataset.samples[:, dataset.labels == t]
        assert np.linalg.matrix_rank(block) == 1


def test_same_seed_same_data():
    settings = SyntheticConfig(seed=9)
    first = generate_synthetic(settings)
    second = generate_synthetic(settings)
    np.testing.assert_array_equal(first.samples, second.samples)
    assert not np.array_equal(first.samples, generate_synthetic(SyntheticConfig(seed=10)).samples)


def test_orthogonal_subspaces_must_fit():
    with pytest.raises(ParameterError):
        generate_synthetic(SyntheticConfig(class_count=3, dim=4, subspace_dim=2))


def test_split_keeps_per_class_counts():
    dataset = generate_synthetic(SyntheticConfig(train_per_class=7, test_per_class=3))
    train_set, test_set = split_per_class(dataset, 7)
    assert np.bincount(train_set.labels).tolist() == [7, 7, 7]
    assert np.bincount(test_set.labels).tolist() == [3, 3, 3]


def test_select_classes_relabels():
    dataset = generate_synthetic(SyntheticConfig(train_per_class=4, test_per_class=0))
    picked = select_classes(dataset, [2, 0], per_class=3)
    assert picked.labels.tolist() == [0, 0, 0, 1, 1, 1]
    assert picked.class_count == 2
    np.testing.assert_array_equal(picked.samples[:, 0], dataset.samples[:, 8])


def test_raw_subspaces_are_separable():
    settings = SyntheticConfig()
    train_set, test_set = split_per_class(generate_synthetic(settings), settings.train_per_class)
    bases = fit_subspace_bases(init_features(train_set.samples), train_set.labels, 3, rank=2)
    predicted = ns_classify(bases, init_features(test_set.samples))
    assert accuracy_report(predicted, test_set.labels).overall >= 0.95
