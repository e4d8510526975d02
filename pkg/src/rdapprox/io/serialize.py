"""Serialization helpers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Any, List, Mapping, Sequence, Tuple

from rdapprox.errors import OutputError, ParameterError


def write_json(path: Path, payload: Mapping[str, object]) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def format_value(value: Any) -> str:
    """17 significant digits for floats; repr-exact and parseable by float()."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) or hasattr(value, "__float__"):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return format(number, ".17g")
    return str(value)


def write_table(path: Path, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    """Comma-separated table with a header row; every line ends with a newline."""
    width = len(columns)
    for index, row in enumerate(rows):
        if len(row) != width:
            raise ParameterError(f"row {index} has {len(row)} values, expected {width}")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows([format_value(v) for v in row] for row in rows)
    except OSError as exc:
        raise OutputError(f"cannot write table {path}: {exc}") from exc


def _parse_cell(text: str) -> Any:
    try:
        return float(text)
    except ValueError:
        return text


def read_table(path: Path) -> Tuple[List[str], List[List[Any]]]:
    """Inverse of write_table: numeric cells come back as floats, the rest as strings."""
    try:
        with path.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.reader(handle)
            try:
                columns = next(reader)
            except StopIteration:
                raise ParameterError(f"{path} has no header row") from None
            rows = [[_parse_cell(cell) for cell in row] for row in reader if row]
    except OSError as exc:
        raise OutputError(f"cannot read table {path}: {exc}") from exc
    return columns, rows
