"""Nearest-subspace classification and feature similarity reports."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import torch

from rdapprox.errors import DimensionMismatchError, EmptyClassError, ParameterError
from rdapprox.redunet.layers import FeatureMatrix

# Relative slack when comparing cumulative singular-value energy against the threshold
_ENERGY_SLACK = 1e-12


@dataclass(frozen=True)
class AccuracyReport:
    overall: float
    per_class: List[float]  # nan for classes absent from the evaluated set
    sample_count: int


@dataclass(frozen=True)
class CosineReport:
    similarity: torch.Tensor  # (m, m) Gram matrix Z^T Z
    class_pair_means: np.ndarray  # (k, k) mean |similarity|


def fit_subspace_bases(
    z: FeatureMatrix,
    labels: Sequence[int] | np.ndarray,
    class_count: int,
    energy_threshold: float = 0.95,
    rank: int = 0,
) -> List[torch.Tensor]:
    """Leading left singular vectors of every class's features.

    The rank is the smallest r whose energy sum_{i<=r} s_i^2 reaches ``energy_threshold``
    of the total, unless a fixed ``rank`` > 0 is given.
    """
    if not 0 < energy_threshold <= 1:
        raise ParameterError("energy_threshold must lie in (0, 1]")
    label_array = np.asarray(labels, dtype=np.int64)
    if label_array.size != z.shape[1]:
        raise DimensionMismatchError(z.shape[1], label_array.size, "labels")
    bases = []
    for t in range(class_count):
        columns = torch.from_numpy(np.flatnonzero(label_array == t))
        if columns.numel() == 0:
            raise EmptyClassError(t)
        u, s, _ = torch.linalg.svd(z[:, columns], full_matrices=False)
        if rank > 0:
            r = min(rank, int(s.numel()))
        else:
            energy = torch.cumsum(s**2, dim=0)
            target = energy_threshold * float(energy[-1]) * (1.0 - _ENERGY_SLACK)
            r = int(torch.searchsorted(energy, torch.tensor([target], dtype=energy.dtype))[0]) + 1
            r = min(r, int(s.numel()))
        bases.append(u[:, :r].contiguous())
    return bases


def subspace_residuals(bases: Sequence[torch.Tensor], z: FeatureMatrix) -> torch.Tensor:
    """||(I - U_t U_t^T) z_i||^2 for every class t and column i, shape (k, m)."""
    residuals = []
    for basis in bases:
        if basis.shape[0] != z.shape[0]:
            raise DimensionMismatchError(basis.shape[0], z.shape[0])
        remainder = z - basis @ (basis.T @ z)
        residuals.append((remainder**2).sum(dim=0))
    return torch.stack(residuals)


def ns_classify(bases: Sequence[torch.Tensor], z: FeatureMatrix) -> np.ndarray:
    """argmin_t of the projection residual; ties go to the lowest class index."""
    # torch.argmin returns the first minimal index
    return torch.argmin(subspace_residuals(bases, z), dim=0).numpy()


def accuracy_report(
    predicted: Sequence[int] | np.ndarray,
    labels: Sequence[int] | np.ndarray,
    class_count: Optional[int] = None,
) -> AccuracyReport:
    pred = np.asarray(predicted, dtype=np.int64)
    truth = np.asarray(labels, dtype=np.int64)
    if pred.shape != truth.shape:
        raise DimensionMismatchError(truth.size, pred.size, "predictions")
    if truth.size == 0:
        raise ParameterError("cannot score an empty set")
    k = class_count if class_count is not None else int(truth.max()) + 1
    per_class = []
    for t in range(k):
        mask = truth == t
        per_class.append(float(np.mean(pred[mask] == t)) if mask.any() else float("nan"))
    return AccuracyReport(
        overall=float(np.mean(pred == truth)), per_class=per_class, sample_count=int(truth.size)
    )


def cosine_similarity_report(
    z: FeatureMatrix, labels: Sequence[int] | np.ndarray, class_count: Optional[int] = None
) -> CosineReport:
    """Gram matrix of unit features and mean |cosine| per class pair.

    Within-class means skip the diagonal when a class has more than one sample.
    """
    label_array = np.asarray(labels, dtype=np.int64)
    if label_array.size != z.shape[1]:
        raise DimensionMismatchError(z.shape[1], label_array.size, "labels")
    k = class_count if class_count is not None else int(label_array.max()) + 1
    gram = z.T @ z
    magnitude = gram.abs().numpy()
    means = np.full((k, k), np.nan)
    members = [np.flatnonzero(label_array == t) for t in range(k)]
    for a in range(k):
        for b in range(k):
            if members[a].size == 0 or members[b].size == 0:
                continue
            block = magnitude[np.ix_(members[a], members[b])]
            if a == b and members[a].size > 1:
                off_diagonal = ~np.eye(members[a].size, dtype=bool)
                means[a, b] = float(block[off_diagonal].mean())
            else:
                means[a, b] = float(block.mean())
    return CosineReport(similarity=gram, class_pair_means=means)
