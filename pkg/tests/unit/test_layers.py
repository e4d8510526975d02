import numpy as np
import pytest
import torch

from rdapprox.constants import MODE_ADAPTIVE, MODE_FIXED
from rdapprox.errors import EmptyClassError, ParameterError, ZeroFeatureError
from rdapprox.redunet.layers import (
    DTYPE,
    MembershipSet,
    build_layer,
    compression_matrices,
    estimate_membership,
    expansion_matrix,
    init_features,
    layer_update,
)


def _features(n: int = 8, m: int = 40, seed: int = 0) -> torch.Tensor:
    rng = np.random.default_rng(seed)
    return init_features(rng.standard_normal((n, m)))


def test_init_features_normalizes_columns():
    z = init_features(np.array([[3.0], [4.0]]))
    torch.testing.assert_close(z, torch.tensor([[0.6], [0.8]], dtype=DTYPE))
    norms = torch.linalg.vector_norm(_features(20, 50), dim=0)
    torch.testing.assert_close(norms, torch.ones(50, dtype=DTYPE))


def test_zero_column_is_rejected():
    data = np.ones((3, 4))
    data[:, 2] = 0.0
    with pytest.raises(ZeroFeatureError) as info:
        init_features(data)
    assert info.value.sample_index == 2


def test_fixed_mode_matches_the_direct_formula():
    z = _features()
    n, m = z.shape
    eps2 = 0.5
    alpha, expansion = expansion_matrix(z, eps2, MODE_FIXED)
    scale = n / (m * eps2)
    direct = scale * torch.linalg.inv(torch.eye(n, dtype=DTYPE) + scale * z @ z.T)
    assert alpha == 1.0
    torch.testing.assert_close(expansion, direct, rtol=1e-10, atol=1e-12)


def test_isotropic_features_need_no_regularizer():
    eye = torch.eye(4, dtype=DTYPE)
    z = torch.cat([eye, -eye], dim=1)
    alpha, expansion = expansion_matrix(z, 0.5, MODE_ADAPTIVE)
    assert alpha == 0.0
    torch.testing.assert_close(expansion, 0.5 * eye)


def test_expansion_is_symmetric_positive_definite():
    _, expansion = expansion_matrix(_features(), 0.5)
    torch.testing.assert_close(expansion, expansion.T)
    assert float(torch.linalg.eigvalsh(expansion).min()) > 0


def test_single_class_compression_equals_expansion():
    z = _features()
    memberships = MembershipSet.one_hot([0] * z.shape[1], 1)
    alpha, expansion = expansion_matrix(z, 0.5)
    [(alpha_1, compression)] = compression_matrices(z, memberships, 0.5)
    assert alpha_1 == alpha
    torch.testing.assert_close(compression, expansion, rtol=0.0, atol=1e-12)


def test_single_class_is_a_fixed_point():
    z = _features()
    memberships = MembershipSet.one_hot([0] * z.shape[1], 1)
    layer = build_layer(z, memberships, 0, 0.5, MODE_ADAPTIVE, 1e-8)
    updated = layer_update(z, layer.expansion, layer.compressions, memberships, 0.5)
    assert float((updated - z).abs().max()) <= 1e-9


def test_zero_step_keeps_features():
    z = _features()
    labels = [i % 2 for i in range(z.shape[1])]
    memberships = MembershipSet.one_hot(labels, 2)
    layer = build_layer(z, memberships, 0, 0.5, MODE_ADAPTIVE, 1e-8)
    updated = layer_update(z, layer.expansion, layer.compressions, memberships, 0.0)
    torch.testing.assert_close(updated, z, rtol=0.0, atol=1e-12)


def test_empty_class_is_rejected():
    z = _features()
    memberships = MembershipSet.one_hot([0] * z.shape[1], 2)
    with pytest.raises(EmptyClassError) as info:
        compression_matrices(z, memberships, 0.5)
    assert info.value.class_index == 1


def test_one_hot_checks_label_range():
    with pytest.raises(ParameterError):
        MembershipSet.one_hot([0, 3], 2)


def test_membership_with_tiny_lambda_is_uniform():
    z = _features()
    compressions = torch.stack(
        [torch.eye(8, dtype=DTYPE) * s for s in (0.1, 1.0, 10.0)]
    )
    weights = estimate_membership(z, compressions, 1e-12).weights
    torch.testing.assert_close(weights, torch.full_like(weights, 1.0 / 3), rtol=0.0, atol=1e-9)


def test_identical_compressions_give_uniform_membership():
    z = _features()
    compressions = torch.stack([torch.eye(8, dtype=DTYPE)] * 2)
    weights = estimate_membership(z, compressions, 500.0).weights
    torch.testing.assert_close(weights, torch.full_like(weights, 0.5))


def test_large_lambda_concentrates_on_the_closest_class():
    z = _features()
    eye = torch.eye(8, dtype=DTYPE)
    compressions = torch.stack([0.001 * eye, eye])
    weights = estimate_membership(z, compressions, 500.0).weights
    assert float(weights[0].min()) > 0.999
    torch.testing.assert_close(weights.sum(dim=0), torch.ones(z.shape[1], dtype=DTYPE))
    assert float(weights.min()) >= 0.0


def test_non_positive_lambda_is_rejected():
    z = _features()
    compressions = torch.stack([torch.eye(8, dtype=DTYPE)])
    with pytest.raises(ParameterError):
        estimate_membership(z, compressions, 0.0)


@pytest.mark.parametrize("mode", [MODE_FIXED, MODE_ADAPTIVE])
def test_compression_lead_uses_all_samples_with_unequal_classes(mode: str):
    z = _features(n=6, m=40, seed=4)
    labels = [0] * 10 + [1] * 30
    memberships = MembershipSet.one_hot(labels, 2)
    eps2 = 0.5
    n, m = z.shape
    eye = torch.eye(n, dtype=DTYPE)
    per_class = compression_matrices(z, memberships, eps2, mode)
    for j, (alpha_j, compression) in enumerate(per_class):
        columns = z[:, [i for i, label in enumerate(labels) if label == j]]
        m_j = columns.shape[1]
        inner = alpha_j * eye + n / (m_j * eps2) * columns @ columns.T
        expected = n / (m * eps2) * torch.linalg.inv(inner)
        torch.testing.assert_close(compression, expected, rtol=1e-10, atol=1e-12)
        class_lead = n / (m_j * eps2) * torch.linalg.inv(inner)
        assert not torch.allclose(compression, class_lead)
