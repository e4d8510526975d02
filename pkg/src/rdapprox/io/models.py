"""Model files: trained networks and PCA transforms in the binary container."""

from __future__ import annotations

import hashlib
import logging
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple

import numpy as np
import torch

from rdapprox.config import TrainConfig
from rdapprox.constants import PACKAGE_VERSION
from rdapprox.errors import ModelFormatError
from rdapprox.io.container import encode_container, read_container, write_blob
from rdapprox.linalg.pca import PCAModel
from rdapprox.redunet.layers import LayerParams
from rdapprox.redunet.network import TrainedNetwork

logger = logging.getLogger(__name__)

KIND_NETWORK = "network"
KIND_PCA = "pca"


def _pca_parts(
    model: PCAModel, prefix: str = ""
) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    meta = {
        "input_dim": model.input_dim,
        "output_dim": model.output_dim,
        "cumulative_variance_ratio": model.cumulative_variance_ratio,
        "total_variance": model.total_variance,
    }
    arrays = {
        f"{prefix}components": model.components,
        f"{prefix}component_eigenvalues": model.component_eigenvalues,
        f"{prefix}mean_vector": model.mean_vector,
    }
    return meta, arrays


def _pca_from_parts(
    meta: Mapping[str, Any], arrays: Mapping[str, np.ndarray], prefix: str = ""
) -> PCAModel:
    try:
        return PCAModel(
            input_dim=int(meta["input_dim"]),
            output_dim=int(meta["output_dim"]),
            components=arrays[f"{prefix}components"],
            component_eigenvalues=arrays[f"{prefix}component_eigenvalues"],
            cumulative_variance_ratio=float(meta["cumulative_variance_ratio"]),
            mean_vector=arrays[f"{prefix}mean_vector"],
            total_variance=float(meta["total_variance"]),
        )
    except KeyError as exc:
        raise ModelFormatError(f"PCA model is missing {exc}") from exc


def _check_kind(meta: Mapping[str, Any], kind: str) -> None:
    if meta.get("kind") != kind:
        raise ModelFormatError(f"expected a {kind} model, found {meta.get('kind')!r}")


def encode_pca(model: PCAModel) -> bytes:
    meta, arrays = _pca_parts(model)
    meta.update({"kind": KIND_PCA, "package_version": PACKAGE_VERSION})
    return encode_container(meta, arrays)


def save_pca(path: Path, model: PCAModel) -> str:
    """Write a PCA model file and return its SHA-256."""
    return _write(path, encode_pca(model))


def load_pca(path: Path) -> PCAModel:
    meta, arrays = read_container(path)
    _check_kind(meta, KIND_PCA)
    return _pca_from_parts(meta, arrays)


def encode_network(network: TrainedNetwork) -> bytes:
    arrays: Dict[str, np.ndarray] = {}
    layers = []
    for layer in network.layers:
        key = f"layer{layer.index:05d}"
        layers.append(
            {"index": layer.index, "alpha": layer.alpha, "class_alphas": list(layer.class_alphas)}
        )
        arrays[f"{key}.expansion"] = layer.expansion.numpy()
        arrays[f"{key}.compressions"] = layer.compressions.numpy()
    for t, basis in enumerate(network.ns_bases):
        arrays[f"ns_basis{t:03d}"] = basis.numpy()
    meta: Dict[str, Any] = {
        "kind": KIND_NETWORK,
        "package_version": PACKAGE_VERSION,
        "dim": network.dim,
        "class_count": network.class_count,
        "config": asdict(network.config),
        "objective_trace": list(network.objective_trace),
        "layers": layers,
        "pca": None,
    }
    if network.pca is not None:
        pca_meta, pca_arrays = _pca_parts(network.pca, prefix="pca.")
        meta["pca"] = pca_meta
        arrays.update(pca_arrays)
    return encode_container(meta, arrays)


def _network_from_parts(
    meta: Mapping[str, Any], arrays: Mapping[str, np.ndarray]
) -> TrainedNetwork:
    _check_kind(meta, KIND_NETWORK)
    try:
        layers = []
        for entry in meta["layers"]:
            key = f"layer{int(entry['index']):05d}"
            layers.append(
                LayerParams(
                    index=int(entry["index"]),
                    alpha=float(entry["alpha"]),
                    expansion=torch.from_numpy(arrays[f"{key}.expansion"]),
                    class_alphas=tuple(float(a) for a in entry["class_alphas"]),
                    compressions=torch.from_numpy(arrays[f"{key}.compressions"]),
                )
            )
        class_count = int(meta["class_count"])
        bases = [torch.from_numpy(arrays[f"ns_basis{t:03d}"]) for t in range(class_count)]
        config = TrainConfig(**meta["config"])
        pca = _pca_from_parts(meta["pca"], arrays, prefix="pca.") if meta["pca"] else None
        return TrainedNetwork(
            layers=layers,
            dim=int(meta["dim"]),
            class_count=class_count,
            ns_bases=bases,
            config=config,
            objective_trace=[float(v) for v in meta["objective_trace"]],
            pca=pca,
        )
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"network model is missing {exc}") from exc


def save_network(path: Path, network: TrainedNetwork) -> str:
    """Write a network model file and return its SHA-256."""
    return _write(path, encode_network(network))


def load_network(path: Path) -> TrainedNetwork:
    meta, arrays = read_container(path)
    network = _network_from_parts(meta, arrays)
    logger.debug(f"Loaded {network.layer_count}-layer network from {path}")
    return network


def _write(path: Path, blob: bytes) -> str:
    write_blob(path, blob)
    return hashlib.sha256(blob).hexdigest()
