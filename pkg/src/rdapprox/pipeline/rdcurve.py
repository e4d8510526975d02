"""Commands on a single spectrum: RD curves, alpha* and the bound audit."""

from __future__ import annotations

import logging
import math
import time
from typing import List, Sequence, Tuple

import numpy as np

from rdapprox.config import RunConfig
from rdapprox.constants import VARIANT_ALPHA_STAR, VARIANT_R0, VARIANT_R1
from rdapprox.io.serialize import format_value, write_json, write_table
from rdapprox.linalg.spectral import Spectrum
from rdapprox.pipeline.report import finish_run, json_number, start_run
from rdapprox.pipeline.sources import load_spectrum
from rdapprox.rd.alpha import alpha_upper_bound, anchor_diagnostic, find_alpha_star
from rdapprox.rd.bounds import BOUND_SLACK, corollary1_bounds, random_spectrum, theorem2_bounds
from rdapprox.rd.curve import distortion_grid, max_abs_error, rd_curve

logger = logging.getLogger("rdapprox")

BOUND_COLUMNS = [
    "spectrum",
    "D",
    "observed",
    "theorem2_lower",
    "theorem2_upper",
    "corollary1_lower",
    "corollary1_upper",
    "restricted",
    "pass",
]


def _unit(config: RunConfig) -> Tuple[str, float]:
    return ("bits", 1.0 / math.log(2.0)) if config.rd.bits else ("nats", 1.0)


def _grid(config: RunConfig, spectrum: Spectrum) -> np.ndarray:
    return distortion_grid(
        spectrum.trace,
        config.rd.grid_points,
        config.rd.grid_spacing,
        config.rd.grid_floor_ratio,
    )


def cmd_rdcurve(config: RunConfig) -> int:
    paths = start_run("rdcurve", config)
    spectrum, source = load_spectrum(config)
    unit, scale = _unit(config)
    started = time.perf_counter()
    curve = rd_curve(
        spectrum,
        _grid(config, spectrum),
        delta=config.rd.delta,
        max_iterations=config.rd.max_iterations,
    )
    names = list(curve.columns)
    rows = [
        [float(curve.grid[i])] + [float(curve.columns[name][i]) * scale for name in names]
        for i in range(curve.grid.size)
    ]
    write_table(paths.curve_csv, ["D", *names], rows)

    assert curve.alpha_star is not None
    errors = {
        name: max_abs_error(curve, name) * scale
        for name in (VARIANT_R0, VARIANT_R1, VARIANT_ALPHA_STAR)
    }
    for name in sorted(curve.diverged):
        logger.warning(f"{name} diverges to -inf on a singular spectrum")
    logger.info(f"✓ {curve.grid.size}-point curve in {time.perf_counter() - started:.3f}s")
    print(
        f"alpha*={curve.alpha_star.alpha_star:.12g} kappa={spectrum.condition_number:.6g} "
        + " ".join(f"maxerr({name})={format_value(err)}" for name, err in errors.items())
        + f" [{unit}]"
    )
    finish_run(
        "rdcurve",
        config,
        paths,
        {"curve": paths.curve_csv},
        {
            "source": source,
            "dim": spectrum.dim,
            "trace": spectrum.trace,
            "alpha_star": curve.alpha_star.alpha_star,
            "condition_number": json_number(spectrum.condition_number),
            "max_abs_error": {name: json_number(err) for name, err in errors.items()},
            "diverged": sorted(curve.diverged),
            "unit": unit,
        },
    )
    return 0


def cmd_alpha(config: RunConfig) -> int:
    paths = start_run("alpha", config)
    spectrum, source = load_spectrum(config)
    result = find_alpha_star(spectrum, config.rd.delta, config.rd.max_iterations)
    upper = alpha_upper_bound(spectrum)
    print(
        f"alpha*={result.alpha_star:.15g} residual={result.residual:.3e} "
        f"iterations={result.iterations} bracket=[0, {upper:.15g}]"
    )
    payload = {
        "source": source,
        "alpha_star": result.alpha_star,
        "residual": result.residual,
        "iterations": result.iterations,
        "delta": result.delta,
        "final_bracket": list(result.bracket),
        "upper_bound": upper,
        "condition_number": json_number(spectrum.condition_number),
    }
    if spectrum.rank > 0:
        diagnostic = anchor_diagnostic(spectrum, config.rd.delta)
        payload["anchor_diagnostic"] = {
            "alpha_star_error": diagnostic.alpha_star_error,
            "best_grid_alpha": diagnostic.best_grid_alpha,
            "best_grid_error": diagnostic.best_grid_error,
        }
        logger.info(
            f"Anchor error at alpha*: {diagnostic.alpha_star_error:.6g}; grid minimum "
            f"{diagnostic.best_grid_error:.6g} at alpha={diagnostic.best_grid_alpha:.4f}"
        )
    write_json(paths.alpha_json, payload)
    finish_run("alpha", config, paths, {"alpha": paths.alpha_json}, payload)
    return 0


def audit_spectrum(
    spectrum: Spectrum, grid: Sequence[float], label: str, delta: float
) -> Tuple[List[List[object]], int]:
    """Bound rows for one spectrum and the number of failing rows.

    Theorem 2 rows on a singular spectrum use the nonzero lambda_min and are reported
    only; Corollary 1 always counts.
    """
    alpha_result = find_alpha_star(spectrum, delta)
    rows: List[List[object]] = []
    failures = 0
    if alpha_result.alpha_star > alpha_upper_bound(spectrum) + 2 * delta + BOUND_SLACK:
        logger.error(f"{label}: alpha* {alpha_result.alpha_star} exceeds its upper bound")
        failures += 1
    for d in grid:
        thm2 = theorem2_bounds(spectrum, float(d), alpha_result)
        cor1 = corollary1_bounds(spectrum, float(d), alpha_result)
        passed = cor1.holds() and (thm2.restricted or thm2.holds())
        if not passed:
            failures += 1
        rows.append(
            [
                label,
                float(d),
                thm2.observed,
                thm2.lower,
                thm2.upper,
                cor1.lower,
                cor1.upper,
                int(thm2.restricted),
                int(passed),
            ]
        )
    return rows, failures


def cmd_bounds(config: RunConfig) -> int:
    paths = start_run("bounds", config)
    started = time.perf_counter()
    rows: List[List[object]] = []
    failures = 0
    count = config.inputs.random_spectra
    if count > 0:
        rng = np.random.default_rng(config.synthetic.seed)
        logger.info(f"Auditing {count} random spectra (seed {config.synthetic.seed})")
        for index in range(count):
            spectrum = random_spectrum(rng)
            spectrum_rows, spectrum_failures = audit_spectrum(
                spectrum, _grid(config, spectrum), f"random{index}", config.rd.delta
            )
            rows.extend(spectrum_rows)
            failures += spectrum_failures
    else:
        spectrum, source = load_spectrum(config)
        rows, failures = audit_spectrum(spectrum, _grid(config, spectrum), source, config.rd.delta)

    write_table(paths.bounds_csv, BOUND_COLUMNS, rows)
    elapsed = time.perf_counter() - started
    if failures:
        logger.error(f"✗ {failures} of {len(rows)} bound checks failed ({elapsed:.1f}s)")
    else:
        logger.info(f"✓ All {len(rows)} bound checks passed in {elapsed:.1f}s")
    print(f"rows={len(rows)} failures={failures}")
    finish_run(
        "bounds",
        config,
        paths,
        {"bounds": paths.bounds_csv},
        {"rows": len(rows), "failures": failures},
    )
    return 1 if failures else 0
