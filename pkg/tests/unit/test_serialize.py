import math
from pathlib import Path

import numpy as np
import pytest

from rdapprox.errors import ParameterError
from rdapprox.io.delimited import load_dataset, load_delimited_matrix, load_labels
from rdapprox.io.serialize import format_value, read_table, write_table


def test_header_only_table(tmp_path: Path):
    path = tmp_path / "empty.csv"
    write_table(path, ["a", "b"], [])
    assert path.read_bytes() == b"a,b\n"
    assert read_table(path) == (["a", "b"], [])


def test_floats_round_trip_exactly(tmp_path: Path):
    path = tmp_path / "values.csv"
    write_table(path, ["D", "R"], [[0.1, 0.7], [math.inf, -math.inf]])
    text = path.read_text(encoding="utf-8")
    assert text.endswith("\n") and "\r" not in text
    columns, rows = read_table(path)
    assert columns == ["D", "R"]
    assert rows[0] == [0.1, 0.7]
    assert rows[1] == [math.inf, -math.inf]


def test_row_width_is_checked(tmp_path: Path):
    with pytest.raises(ParameterError):
        write_table(tmp_path / "bad.csv", ["a", "b"], [[1.0]])


def test_format_value():
    assert format_value(True) == "1"
    assert format_value(3) == "3"
    assert format_value(math.nan) == "nan"
    assert float(format_value(1 / 3)) == 1 / 3
    assert format_value("ar") == "ar"


def test_delimited_samples_are_rows(tmp_path: Path):
    data = tmp_path / "data.csv"
    data.write_text("# two samples\n1.0,2.0,3.0\n4.0,5.0,6.0\n", encoding="utf-8")
    labels = tmp_path / "labels.txt"
    labels.write_text("0\n1\n", encoding="utf-8")
    assert load_delimited_matrix(data).shape == (2, 3)
    dataset = load_dataset(data, labels)
    assert dataset.samples.shape == (3, 2)
    np.testing.assert_array_equal(dataset.samples[:, 1], [4.0, 5.0, 6.0])
    assert dataset.class_count == 2


def test_labels_must_be_non_negative_integers(tmp_path: Path):
    path = tmp_path / "labels.txt"
    path.write_text("0\n1.5\n", encoding="utf-8")
    with pytest.raises(ParameterError):
        load_labels(path)
    path.write_text("0\n-1\n", encoding="utf-8")
    with pytest.raises(ParameterError):
        load_labels(path)
