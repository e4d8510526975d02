"""The coding-rate-reduction objective with adaptive regularization."""

from __future__ import annotations

from typing import Sequence, Tuple

import torch

from rdapprox.constants import DEFAULT_DELTA, MODE_ADAPTIVE
from rdapprox.errors import DimensionMismatchError, EmptyClassError, ParameterError
from rdapprox.redunet.layers import DTYPE, FeatureMatrix, MembershipSet, mode_alpha


def _logdet(matrix: torch.Tensor) -> float:
    sign, value = torch.linalg.slogdet(matrix)
    if float(sign) <= 0:
        raise ParameterError("log-determinant of a non positive-definite matrix")
    return float(value)


def expansion_rate(z: FeatureMatrix, epsilon_sq: float, alpha: float) -> float:
    """1/2 log det(alpha I + n/(m eps^2) Z Z^T)."""
    n, m = z.shape
    scale = n / (m * epsilon_sq)
    return 0.5 * _logdet(alpha * torch.eye(n, dtype=DTYPE) + scale * (z @ z.T))


def compression_rate(
    z: FeatureMatrix, memberships: MembershipSet, epsilon_sq: float, class_alphas: Sequence[float]
) -> float:
    """sum_j tr(Pi_j)/(2m) log det(alpha_j I + n/(tr(Pi_j) eps^2) Z Pi_j Z^T)."""
    n, m = z.shape
    if len(class_alphas) != memberships.class_count:
        raise DimensionMismatchError(memberships.class_count, len(class_alphas), "class alphas")
    total = 0.0
    for j, weight in enumerate(memberships.weights):
        trace = float(weight.sum())
        if trace <= 0:
            raise EmptyClassError(j)
        cov = (z * weight) @ z.T
        matrix = class_alphas[j] * torch.eye(n, dtype=DTYPE) + n / (trace * epsilon_sq) * cov
        total += trace / (2.0 * m) * _logdet(matrix)
    return total


def objective(
    z: FeatureMatrix,
    memberships: MembershipSet,
    epsilon_sq: float,
    alphas: Tuple[float, Sequence[float]],
) -> float:
    """Rate reduction: expansion rate minus the membership-weighted compression rates."""
    if not epsilon_sq > 0:
        raise ParameterError(f"epsilon_sq must be positive, got {epsilon_sq}")
    alpha, class_alphas = alphas
    return expansion_rate(z, epsilon_sq, alpha) - compression_rate(
        z, memberships, epsilon_sq, class_alphas
    )


def objective_alphas(
    z: FeatureMatrix,
    memberships: MembershipSet,
    mode: str = MODE_ADAPTIVE,
    delta: float = DEFAULT_DELTA,
) -> Tuple[float, Tuple[float, ...]]:
    """Regularizers that zero the rate of each normalized covariance at its trace."""
    m = z.shape[1]
    alpha = mode_alpha(z @ z.T / m, mode, delta)
    class_alphas = []
    for j, weight in enumerate(memberships.weights):
        trace = float(weight.sum())
        if trace <= 0:
            raise EmptyClassError(j)
        class_alphas.append(mode_alpha((z * weight) @ z.T / trace, mode, delta))
    return alpha, tuple(class_alphas)
