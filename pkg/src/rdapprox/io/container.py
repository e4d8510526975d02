"""Versioned binary container for model files.

Layout: magic (8 bytes), format version (uint32 BE), header length (uint32 BE),
UTF-8 JSON header, then every array as row-major little-endian float64.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple

import numpy as np

from rdapprox.constants import MODEL_FORMAT_VERSION, MODEL_MAGIC
from rdapprox.errors import ModelFormatError, OutputError

_PREFIX = struct.Struct(">II")
_DTYPE = np.dtype("<f8")


def encode_container(meta: Mapping[str, Any], arrays: Mapping[str, np.ndarray]) -> bytes:
    """Serialize ``meta`` and named arrays; equal inputs always give equal bytes."""
    entries = []
    chunks = []
    offset = 0
    for name, array in arrays.items():
        data = np.ascontiguousarray(array, dtype=_DTYPE)
        raw = data.tobytes(order="C")
        entries.append({"name": name, "shape": list(data.shape), "offset": offset})
        chunks.append(raw)
        offset += len(raw)
    payload = b"".join(chunks)
    header = {
        "arrays": entries,
        "meta": meta,
        "payload_bytes": len(payload),
        "payload_sha256": hashlib.sha256(payload).hexdigest(),
    }
    try:
        header_bytes = json.dumps(
            header, sort_keys=True, separators=(",", ":"), allow_nan=False
        ).encode("utf-8")
    except ValueError as exc:
        raise ModelFormatError(f"model metadata is not finite JSON: {exc}") from exc
    prefix = _PREFIX.pack(MODEL_FORMAT_VERSION, len(header_bytes))
    return MODEL_MAGIC + prefix + header_bytes + payload


def decode_container(blob: bytes) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    start = len(MODEL_MAGIC) + _PREFIX.size
    if len(blob) < start or blob[: len(MODEL_MAGIC)] != MODEL_MAGIC:
        raise ModelFormatError("not an rdapprox model file (bad magic)")
    version, header_length = _PREFIX.unpack_from(blob, len(MODEL_MAGIC))
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {version} (expected {MODEL_FORMAT_VERSION})"
        )
    if len(blob) < start + header_length:
        raise ModelFormatError("model file truncated inside the header")
    try:
        header = json.loads(blob[start : start + header_length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"unreadable model header: {exc}") from exc

    payload = blob[start + header_length :]
    if len(payload) != header.get("payload_bytes"):
        raise ModelFormatError(
            f"payload size {len(payload)} does not match header {header.get('payload_bytes')}"
        )
    if hashlib.sha256(payload).hexdigest() != header.get("payload_sha256"):
        raise ModelFormatError("payload checksum mismatch")

    arrays: Dict[str, np.ndarray] = {}
    for entry in header["arrays"]:
        shape = tuple(int(s) for s in entry["shape"])
        count = int(np.prod(shape, dtype=np.int64))
        begin = int(entry["offset"])
        end = begin + count * _DTYPE.itemsize
        if end > len(payload):
            raise ModelFormatError(f"array {entry['name']!r} runs past the payload")
        data = np.frombuffer(payload[begin:end], dtype=_DTYPE).reshape(shape)
        arrays[entry["name"]] = data.astype(np.float64)
    return header["meta"], arrays


def write_blob(path: Path, blob: bytes) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(blob)
    except OSError as exc:
        raise OutputError(f"cannot write model file {path}: {exc}") from exc


def read_container(path: Path) -> Tuple[Dict[str, Any], Dict[str, np.ndarray]]:
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise OutputError(f"cannot read model file {path}: {exc}") from exc
    return decode_container(blob)
