import numpy as np
import pytest
import torch

from rdapprox.constants import MODE_FIXED
from rdapprox.redunet.layers import DTYPE, MembershipSet, init_features
from rdapprox.redunet.objective import expansion_rate, objective, objective_alphas


def _features(seed: int = 0) -> torch.Tensor:
    return init_features(np.random.default_rng(seed).standard_normal((6, 30)))


def test_single_class_has_no_rate_reduction():
    z = _features()
    memberships = MembershipSet.one_hot([0] * 30, 1)
    alphas = objective_alphas(z, memberships)
    assert abs(objective(z, memberships, 0.5, alphas)) < 1e-12


def test_orthogonal_classes_reduce_the_rate():
    rng = np.random.default_rng(1)
    data = np.zeros((6, 40))
    data[:3, :20] = rng.standard_normal((3, 20))
    data[3:, 20:] = rng.standard_normal((3, 20))
    z = init_features(data)
    memberships = MembershipSet.one_hot([0] * 20 + [1] * 20, 2)
    assert objective(z, memberships, 0.5, objective_alphas(z, memberships)) > 0


def test_huge_distortion_budget_leaves_nothing_to_code():
    z = _features()
    memberships = MembershipSet.one_hot([i % 3 for i in range(30)], 3)
    value = objective(z, memberships, 1e6, (1.0, (1.0, 1.0, 1.0)))
    assert value == pytest.approx(0.0, abs=1e-4)


def test_fixed_mode_alphas_are_one():
    z = _features()
    memberships = MembershipSet.one_hot([i % 2 for i in range(30)], 2)
    assert objective_alphas(z, memberships, MODE_FIXED) == (1.0, (1.0, 1.0))


def test_isotropic_features_at_unit_budget_have_zero_expansion_rate():
    eye = torch.eye(4, dtype=DTYPE)
    z = torch.cat([eye, -eye], dim=1)
    memberships = MembershipSet.one_hot([0] * 8, 1)
    alpha, _ = objective_alphas(z, memberships)
    assert alpha == 0.0
    assert expansion_rate(z, 1.0, alpha) == pytest.approx(0.0, abs=1e-12)
