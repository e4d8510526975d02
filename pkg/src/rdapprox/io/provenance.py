"""Run metadata written next to every command's outputs."""

from __future__ import annotations

import importlib.metadata
import platform
from datetime import datetime, timezone
from typing import Any, Dict, Mapping, Optional

from rdapprox.config import RunConfig, config_to_dict
from rdapprox.constants import MODEL_FORMAT_VERSION, PACKAGE_VERSION

TRACKED_PACKAGES = ("numpy", "torch")


def _installed_version(package_name: str) -> Optional[str]:
    try:
        return importlib.metadata.version(package_name)
    except importlib.metadata.PackageNotFoundError:
        return None


def tool_versions() -> Dict[str, Optional[str]]:
    versions: Dict[str, Optional[str]] = {"python": platform.python_version()}
    versions.update({name: _installed_version(name) for name in TRACKED_PACKAGES})
    versions["rdapprox"] = PACKAGE_VERSION
    return versions


def build_run_metadata(
    command: str,
    config: RunConfig,
    outputs: Mapping[str, str],
    summary: Optional[Mapping[str, Any]] = None,
) -> Dict[str, Any]:
    return {
        "command": command,
        "model_format_version": MODEL_FORMAT_VERSION,
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "tool_versions": tool_versions(),
        "config": config_to_dict(config),
        "outputs": dict(outputs),
        "summary": dict(summary or {}),
    }
