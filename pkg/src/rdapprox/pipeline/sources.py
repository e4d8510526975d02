"""Resolve command inputs: spectra and labelled datasets."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Tuple

from rdapprox.config import RunConfig
from rdapprox.errors import ParameterError
from rdapprox.io.dataset import Dataset, split_per_class
from rdapprox.io.delimited import load_dataset, load_delimited_matrix
from rdapprox.io.synthetic import generate_synthetic
from rdapprox.linalg.pca import fit_pca
from rdapprox.linalg.spectral import (
    Spectrum,
    eigendecompose,
    estimate_covariance,
    spectrum_from_eigenvalues,
)

logger = logging.getLogger(__name__)


def load_spectrum(config: RunConfig) -> Tuple[Spectrum, str]:
    """Spectrum from exactly one of --eigenvalues, --cov or --data.

    With --data and a PCA selector the spectrum is the retained top-n one.
    """
    inputs = config.inputs
    given = [
        name
        for name, value in (
            ("eigenvalues", inputs.eigenvalues),
            ("cov", inputs.cov),
            ("data", inputs.data),
        )
        if value
    ]
    if len(given) != 1:
        raise ParameterError(
            "give exactly one spectrum source: --eigenvalues, --cov or --data"
            + (f" (got {', '.join(given)})" if given else "")
        )
    if inputs.eigenvalues:
        return spectrum_from_eigenvalues(inputs.eigenvalues), "eigenvalues"
    if inputs.cov:
        spectrum, _ = eigendecompose(load_delimited_matrix(Path(inputs.cov)))
        return spectrum, f"cov:{inputs.cov}"

    assert inputs.data is not None
    dataset = load_dataset(Path(inputs.data), _optional_path(inputs.labels))
    if config.pca.enabled:
        model = fit_pca(
            dataset.samples,
            target_dim=config.pca.dim,
            target_ratio=config.pca.ratio,
            centered=config.pca.centered,
        )
        return spectrum_from_eigenvalues(model.component_eigenvalues), f"pca:{inputs.data}"
    spectrum, _ = eigendecompose(estimate_covariance(dataset.samples, config.pca.centered))
    return spectrum, f"data:{inputs.data}"


def _optional_path(value: Optional[str]) -> Optional[Path]:
    return Path(value) if value else None


def load_train_test(config: RunConfig, need_test: bool) -> Tuple[Dataset, Optional[Dataset]]:
    """Synthetic split, or --data/--labels plus optional --test-data/--test-labels."""
    inputs = config.inputs
    if inputs.synthetic:
        dataset = generate_synthetic(config.synthetic)
        train, test = split_per_class(dataset, config.synthetic.train_per_class)
        logger.info(
            f"Synthetic split: {train.sample_count} train / {test.sample_count} test samples"
        )
        return train, test if test.sample_count else None

    if not inputs.data or not inputs.labels:
        raise ParameterError("training needs --data and --labels (or --synthetic)")
    train = load_dataset(Path(inputs.data), Path(inputs.labels))
    test = None
    if inputs.test_data:
        if not inputs.test_labels:
            raise ParameterError("--test-data needs --test-labels")
        test = load_dataset(Path(inputs.test_data), Path(inputs.test_labels))
    elif need_test:
        raise ParameterError("evaluation needs --test-data and --test-labels (or --synthetic)")
    return train, test


def load_eval_set(config: RunConfig) -> Dataset:
    """Evaluation data: --test-data/--test-labels, else the synthetic test split."""
    inputs = config.inputs
    if inputs.test_data:
        if not inputs.test_labels:
            raise ParameterError("--test-data needs --test-labels")
        return load_dataset(Path(inputs.test_data), Path(inputs.test_labels))
    if inputs.data and inputs.labels:
        return load_dataset(Path(inputs.data), Path(inputs.labels))
    if inputs.synthetic:
        _, test = load_train_test(config, need_test=True)
        if test is None:
            raise ParameterError("empty test set: synthetic test_per_class is 0")
        return test
    raise ParameterError(
        "evaluation needs --test-data/--test-labels, --data/--labels or --synthetic"
    )
