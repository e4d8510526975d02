"""Building blocks of one AR-ReduNet layer.

Features are torch float64 tensors of shape (n, m) whose columns lie on the unit sphere.
Memberships are stored as a (k, m) weight matrix, row j being the diagonal of Pi_j.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import torch

from rdapprox.constants import ALPHA_FLOOR, DEFAULT_DELTA, MODE_ADAPTIVE, MODE_FIXED, MODES
from rdapprox.errors import (
    DimensionMismatchError,
    EmptyClassError,
    FeatureCollapseError,
    ParameterError,
    RegularizationError,
    ZeroFeatureError,
)
from rdapprox.linalg.spectral import spectrum_from_eigenvalues
from rdapprox.rd.alpha import find_alpha_star

logger = logging.getLogger(__name__)

DTYPE = torch.float64

FeatureMatrix = torch.Tensor


@dataclass(frozen=True)
class MembershipSet:
    weights: torch.Tensor  # (k, m)

    @property
    def class_count(self) -> int:
        return int(self.weights.shape[0])

    @property
    def sample_count(self) -> int:
        return int(self.weights.shape[1])

    def traces(self) -> torch.Tensor:
        return self.weights.sum(dim=1)

    @classmethod
    def one_hot(cls, labels: Sequence[int] | np.ndarray, class_count: int) -> "MembershipSet":
        index = torch.as_tensor(np.asarray(labels, dtype=np.int64))
        if index.numel() and (int(index.min()) < 0 or int(index.max()) >= class_count):
            raise ParameterError(f"labels must lie in [0, {class_count})")
        weights = torch.zeros(class_count, index.numel(), dtype=DTYPE)
        weights[index, torch.arange(index.numel())] = 1.0
        return cls(weights=weights)


@dataclass(frozen=True)
class LayerParams:
    index: int
    alpha: float
    expansion: torch.Tensor  # E, (n, n)
    class_alphas: Tuple[float, ...]
    compressions: torch.Tensor  # C_1..C_k stacked, (k, n, n)


def as_tensor(data: np.ndarray | torch.Tensor) -> torch.Tensor:
    if isinstance(data, torch.Tensor):
        return data.to(DTYPE)
    return torch.from_numpy(np.ascontiguousarray(data, dtype=np.float64))


def init_features(data: np.ndarray | torch.Tensor) -> FeatureMatrix:
    """Project every sample column onto the unit sphere."""
    x = as_tensor(data)
    if x.ndim != 2:
        raise ParameterError(f"data must be an n x m matrix, got shape {tuple(x.shape)}")
    norms = torch.linalg.vector_norm(x, dim=0)
    zero = torch.nonzero(norms == 0)
    if zero.numel():
        raise ZeroFeatureError(int(zero[0, 0]))
    return x / norms


def _solve_alpha(cov: torch.Tensor, delta: float) -> Tuple[float, bool]:
    values = torch.linalg.eigvalsh(cov).numpy()
    spectrum = spectrum_from_eigenvalues(values)
    alpha = find_alpha_star(spectrum, delta).alpha_star
    return alpha, spectrum.is_singular


def _regularized_inverse(
    alpha: float, lead: float, inner: float, cov: torch.Tensor
) -> torch.Tensor:
    n = cov.shape[0]
    matrix = alpha * torch.eye(n, dtype=DTYPE) + inner * cov
    factor, info = torch.linalg.cholesky_ex(matrix)
    if int(info) != 0:
        raise RegularizationError(
            f"alpha I + c Z Z^T is not positive definite (alpha = {alpha!r}); "
            "increase the regularization floor"
        )
    inverse = torch.cholesky_inverse(factor)
    return lead * 0.5 * (inverse + inverse.T)


def mode_alpha(cov: torch.Tensor, mode: str, delta: float) -> float:
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == MODE_FIXED:
        return 1.0
    alpha, singular = _solve_alpha(cov, delta)
    if singular and alpha < ALPHA_FLOOR:
        logger.debug(f"alpha {alpha!r} raised to the floor {ALPHA_FLOOR}")
        return ALPHA_FLOOR
    return alpha


def expansion_matrix(
    z: FeatureMatrix, epsilon_sq: float, mode: str = MODE_ADAPTIVE, delta: float = DEFAULT_DELTA
) -> Tuple[float, torch.Tensor]:
    """alpha and E = n/(m eps^2) (alpha I + n/(m eps^2) Z Z^T)^-1."""
    if not epsilon_sq > 0:
        raise ParameterError(f"epsilon_sq must be positive, got {epsilon_sq}")
    n, m = z.shape
    gram = z @ z.T
    alpha = mode_alpha(gram / m, mode, delta)
    scale = n / (m * epsilon_sq)
    return alpha, _regularized_inverse(alpha, scale, scale, gram)


def compression_matrices(
    z: FeatureMatrix,
    memberships: MembershipSet,
    epsilon_sq: float,
    mode: str = MODE_ADAPTIVE,
    delta: float = DEFAULT_DELTA,
) -> List[Tuple[float, torch.Tensor]]:
    """Per class: alpha_j and C_j = n/(m eps^2) (alpha_j I + n/(tr(Pi_j) eps^2) Z Pi_j Z^T)^-1.

    The leading factor uses m, not tr(Pi_j).
    """
    if not epsilon_sq > 0:
        raise ParameterError(f"epsilon_sq must be positive, got {epsilon_sq}")
    n, m = z.shape
    if memberships.sample_count != m:
        raise DimensionMismatchError(m, memberships.sample_count, "membership columns")
    lead = n / (m * epsilon_sq)
    result = []
    for j, weight in enumerate(memberships.weights):
        trace = float(weight.sum())
        if trace <= 0:
            raise EmptyClassError(j)
        cov = (z * weight) @ z.T
        alpha_j = mode_alpha(cov / trace, mode, delta)
        inner = n / (trace * epsilon_sq)
        result.append((alpha_j, _regularized_inverse(alpha_j, lead, inner, cov)))
    return result


def _renormalize(z: torch.Tensor, layer: int) -> FeatureMatrix:
    norms = torch.linalg.vector_norm(z, dim=0)
    collapsed = torch.nonzero(norms == 0)
    if collapsed.numel():
        raise FeatureCollapseError(layer, int(collapsed[0, 0]))
    return z / norms


def layer_update(
    z: FeatureMatrix,
    expansion: torch.Tensor,
    compressions: torch.Tensor,
    memberships: MembershipSet,
    eta: float,
    layer: int = 0,
) -> FeatureMatrix:
    """Z + eta (E Z - sum_j C_j Z Pi_j), then every column back onto the sphere."""
    if compressions.shape[0] != memberships.class_count:
        raise DimensionMismatchError(
            compressions.shape[0], memberships.class_count, "compression matrices"
        )
    compress = torch.zeros_like(z)
    # Fixed class order keeps the reduction deterministic
    for j in range(memberships.class_count):
        compress = compress + (compressions[j] @ z) * memberships.weights[j]
    direction = expansion @ z - compress
    return _renormalize(z + eta * direction, layer)


def estimate_membership(
    z: FeatureMatrix, compressions: torch.Tensor, lambda_u: float
) -> MembershipSet:
    """Softmax of -lambda_u ||C_j z_i|| over classes, with max subtraction."""
    if not lambda_u > 0:
        raise ParameterError(f"lambda_u must be positive, got {lambda_u}")
    distances = torch.linalg.vector_norm(compressions @ z, dim=1)  # (k, m)
    logits = -lambda_u * distances
    logits = logits - logits.max(dim=0, keepdim=True).values
    weights = torch.exp(logits)
    return MembershipSet(weights=weights / weights.sum(dim=0, keepdim=True))


def build_layer(
    z: FeatureMatrix,
    memberships: MembershipSet,
    index: int,
    epsilon_sq: float,
    mode: str,
    delta: float,
) -> LayerParams:
    alpha, expansion = expansion_matrix(z, epsilon_sq, mode, delta)
    per_class = compression_matrices(z, memberships, epsilon_sq, mode, delta)
    return LayerParams(
        index=index,
        alpha=alpha,
        expansion=expansion,
        class_alphas=tuple(a for a, _ in per_class),
        compressions=torch.stack([c for _, c in per_class]),
    )
