"""Per-run bookkeeping shared by every command."""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Mapping, Optional

from rdapprox.config import RunConfig, config_to_dict
from rdapprox.io.paths import RunPaths, build_paths
from rdapprox.io.provenance import build_run_metadata
from rdapprox.io.serialize import write_json

logger = logging.getLogger("rdapprox")


def start_run(command: str, config: RunConfig) -> RunPaths:
    """Log the resolved config and pick the output directory."""
    logger.info(f"Resolved config: {json.dumps(config_to_dict(config), sort_keys=True)}")
    out = Path(config.output.out) if config.output.out else None
    paths = build_paths(Path(config.output.root_dir), command, out)
    logger.info(f"Writing {command} outputs to {paths.output_dir}")
    return paths


def json_number(value: float) -> Any:
    """Non-finite floats become the strings written into tables."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def finish_run(
    command: str,
    config: RunConfig,
    paths: RunPaths,
    outputs: Mapping[str, Path],
    summary: Optional[Mapping[str, Any]] = None,
) -> None:
    metadata = build_run_metadata(
        command, config, {name: str(path) for name, path in outputs.items()}, summary
    )
    write_json(paths.run_json, metadata)
    for name, path in outputs.items():
        logger.info(f"Wrote {name} to {path}")
