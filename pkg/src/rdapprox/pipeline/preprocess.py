"""PCA preprocessing command."""

from __future__ import annotations

import logging
import time
from pathlib import Path

from rdapprox.config import RunConfig
from rdapprox.errors import ParameterError
from rdapprox.io.delimited import load_dataset
from rdapprox.io.models import save_pca
from rdapprox.io.serialize import write_table
from rdapprox.io.synthetic import generate_synthetic
from rdapprox.linalg.pca import (
    approximation_error_sweep,
    condition_sweep,
    default_sweep_dims,
    fit_pca,
)
from rdapprox.linalg.spectral import eigendecompose, estimate_covariance
from rdapprox.pipeline.report import finish_run, json_number, start_run

logger = logging.getLogger("rdapprox")

SWEEP_COLUMNS = [
    "dim",
    "ratio",
    "condition_number",
    "alpha_star",
    "maxerr_Ralpha_star",
    "maxerr_R1",
    "maxerr_R0",
]


def cmd_pca(config: RunConfig) -> int:
    if not config.pca.enabled:
        raise ParameterError("pca needs --pca-dim or --pca-ratio")
    paths = start_run("pca", config)
    if config.inputs.synthetic:
        dataset = generate_synthetic(config.synthetic)
    elif config.inputs.data:
        labels = Path(config.inputs.labels) if config.inputs.labels else None
        dataset = load_dataset(Path(config.inputs.data), labels)
    else:
        raise ParameterError("pca needs --data or --synthetic")

    logger.info(f"Stage 1/3: Eigendecomposition of the {dataset.dim}-dim sample covariance")
    started = time.perf_counter()
    spectrum, _ = eigendecompose(estimate_covariance(dataset.samples, config.pca.centered))
    logger.info(
        f"✓ rank {spectrum.rank}, kappa {spectrum.condition_number:.6g} "
        f"in {time.perf_counter() - started:.1f}s"
    )

    logger.info("Stage 2/3: Fitting PCA")
    model = fit_pca(
        dataset.samples,
        target_dim=config.pca.dim,
        target_ratio=config.pca.ratio,
        centered=config.pca.centered,
    )
    digest = save_pca(paths.pca_model, model)
    logger.info(f"✓ PCA model sha256 {digest}")
    print(
        f"p={model.input_dim} n={model.output_dim} P={model.cumulative_variance_ratio:.6f} "
        f"kappa_before={spectrum.condition_number:.6g} "
        f"kappa_after={model.retained_condition_number:.6g}"
    )

    logger.info("Stage 3/3: Condition-number and approximation-error sweep")
    started = time.perf_counter()
    dims = list(config.pca.sweep) or default_sweep_dims(spectrum.rank)
    conditions = condition_sweep(spectrum, dims)
    errors = approximation_error_sweep(
        spectrum,
        dims,
        config.rd.grid_points,
        config.rd.grid_spacing,
        config.rd.grid_floor_ratio,
        config.rd.delta,
    )
    rows = [
        [
            c.dim,
            c.ratio,
            c.condition_number,
            e.alpha_star,
            e.error_alpha_star,
            e.error_r1,
            e.error_r0,
        ]
        for c, e in zip(conditions, errors)
    ]
    write_table(paths.pca_sweep_csv, SWEEP_COLUMNS, rows)
    logger.info(f"✓ {len(rows)} sweep rows in {time.perf_counter() - started:.1f}s")

    finish_run(
        "pca",
        config,
        paths,
        {"pca_model": paths.pca_model, "pca_sweep": paths.pca_sweep_csv},
        {
            "input_dim": model.input_dim,
            "output_dim": model.output_dim,
            "cumulative_variance_ratio": model.cumulative_variance_ratio,
            "condition_number_before": json_number(spectrum.condition_number),
            "condition_number_after": json_number(model.retained_condition_number),
            "sha256": digest,
        },
    )
    return 0
