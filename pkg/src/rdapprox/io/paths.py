"""Output path helpers."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional


@dataclass(frozen=True)
class RunPaths:
    output_dir: Path
    run_json: Path
    curve_csv: Path
    bounds_csv: Path
    alpha_json: Path
    pca_model: Path
    pca_sweep_csv: Path
    network_model: Path
    objective_csv: Path
    accuracy_json: Path
    similarity_csv: Path
    compare_csv: Path
    compare_depth_csv: Path
    compare_pca_csv: Path


def build_paths(root_dir: Path, command: str, out: Optional[Path] = None) -> RunPaths:
    """Files of one command under ``<root_dir>/<command>/`` or under ``out``."""
    output_dir = out if out is not None else root_dir / command
    return RunPaths(
        output_dir=output_dir,
        run_json=output_dir / "run.json",
        curve_csv=output_dir / "rd_curve.csv",
        bounds_csv=output_dir / "bounds.csv",
        alpha_json=output_dir / "alpha.json",
        pca_model=output_dir / "pca.rdm",
        pca_sweep_csv=output_dir / "pca_sweep.csv",
        network_model=output_dir / "network.rdm",
        objective_csv=output_dir / "objective_trace.csv",
        accuracy_json=output_dir / "accuracy.json",
        similarity_csv=output_dir / "similarity.csv",
        compare_csv=output_dir / "compare.csv",
        compare_depth_csv=output_dir / "compare_depth.csv",
        compare_pca_csv=output_dir / "compare_pca.csv",
    )
