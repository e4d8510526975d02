"""Dataset container and class-wise subsetting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from rdapprox.errors import DimensionMismatchError, EmptyClassError, ParameterError


@dataclass(frozen=True)
class Dataset:
    samples: np.ndarray  # p x m, one sample per column
    labels: Optional[np.ndarray]  # m class indices in [0, class_count)
    class_count: int
    provenance: str

    def __post_init__(self) -> None:
        if self.samples.ndim != 2:
            raise ParameterError(f"samples must be p x m, got shape {self.samples.shape}")
        if not np.all(np.isfinite(self.samples)):
            raise ParameterError(f"{self.provenance}: non-finite sample entries")
        if self.labels is not None:
            if self.labels.shape != (self.sample_count,):
                raise DimensionMismatchError(self.sample_count, int(self.labels.size), "labels")
            if self.labels.size and (
                int(self.labels.min()) < 0 or int(self.labels.max()) >= self.class_count
            ):
                raise ParameterError(f"labels must lie in [0, {self.class_count})")

    @property
    def dim(self) -> int:
        return int(self.samples.shape[0])

    @property
    def sample_count(self) -> int:
        return int(self.samples.shape[1])

    def require_labels(self) -> np.ndarray:
        if self.labels is None:
            raise ParameterError(f"{self.provenance}: labels are required")
        return self.labels

    def subset(self, columns: np.ndarray, provenance: Optional[str] = None) -> "Dataset":
        labels = self.labels[columns] if self.labels is not None else None
        return Dataset(
            samples=np.ascontiguousarray(self.samples[:, columns]),
            labels=labels,
            class_count=self.class_count,
            provenance=provenance or self.provenance,
        )


def split_per_class(dataset: Dataset, train_per_class: int) -> Tuple[Dataset, Dataset]:
    """First ``train_per_class`` samples of every class train, the rest test (order kept)."""
    labels = dataset.require_labels()
    if train_per_class < 1:
        raise ParameterError("train_per_class must be positive")
    train_columns = []
    for t in range(dataset.class_count):
        members = np.flatnonzero(labels == t)
        if members.size == 0:
            raise EmptyClassError(t)
        train_columns.append(members[:train_per_class])
    train_mask = np.zeros(dataset.sample_count, dtype=bool)
    train_mask[np.concatenate(train_columns)] = True
    return (
        dataset.subset(np.flatnonzero(train_mask), f"{dataset.provenance} [train]"),
        dataset.subset(np.flatnonzero(~train_mask), f"{dataset.provenance} [test]"),
    )


def select_classes(dataset: Dataset, classes: Sequence[int], per_class: int) -> Dataset:
    """First ``per_class`` samples of each listed class, relabelled 0..len(classes)-1."""
    labels = dataset.require_labels()
    if per_class < 1:
        raise ParameterError("per_class must be positive")
    columns = []
    new_labels = []
    for new_index, original in enumerate(classes):
        members = np.flatnonzero(labels == original)[:per_class]
        if members.size == 0:
            raise EmptyClassError(int(original))
        columns.append(members)
        new_labels.append(np.full(members.size, new_index, dtype=np.int64))
    picked = np.concatenate(columns)
    return Dataset(
        samples=np.ascontiguousarray(dataset.samples[:, picked]),
        labels=np.concatenate(new_labels),
        class_count=len(classes),
        provenance=f"{dataset.provenance} classes={list(classes)} x{per_class}",
    )
