from pathlib import Path

import pytest

from rdapprox.config import PcaConfig, TrainConfig, load_config, parse_float_list
from rdapprox.errors import ParameterError


def test_defaults_without_a_file(tmp_path: Path):
    config = load_config(tmp_path / "absent.toml")
    assert config.train.eta == 0.5
    assert config.train.lambda_u == 500.0
    assert config.train.epsilon_sq == 0.5
    assert config.rd.delta == 1e-8
    assert config.rd.grid_points == 200
    assert config.train.mode == "ar"


def test_file_then_overrides(tmp_path: Path):
    path = tmp_path / "rdapprox.toml"
    path.write_text(
        '[train]\nlayer_count = 20\nmode = "fixed"\n\n[pca]\nsweep = [1, 5, 10]\n',
        encoding="utf-8",
    )
    config = load_config(path, {"train": {"layer_count": 7, "eta": None}})
    assert config.train.layer_count == 7
    assert config.train.mode == "fixed"
    assert config.train.eta == 0.5
    assert config.pca.sweep == (1, 5, 10)


def test_unknown_keys_are_rejected(tmp_path: Path):
    path = tmp_path / "rdapprox.toml"
    path.write_text("[train]\nlayers = 3\n", encoding="utf-8")
    with pytest.raises(ParameterError, match="unknown keys"):
        load_config(path)
    path.write_text("[gui]\nx = 1\n", encoding="utf-8")
    with pytest.raises(ParameterError, match="unknown config sections"):
        load_config(path)


def test_section_validation():
    with pytest.raises(ParameterError):
        TrainConfig(epsilon_sq=0.0)
    with pytest.raises(ParameterError):
        TrainConfig(mode="adaptive")
    with pytest.raises(ParameterError):
        PcaConfig(dim=10, ratio=0.9)
    assert not PcaConfig().enabled
    assert PcaConfig(ratio=0.98).enabled


def test_parse_float_list():
    assert parse_float_list("1, 0.5,0.25") == (1.0, 0.5, 0.25)
    with pytest.raises(ParameterError):
        parse_float_list("1,abc")
    with pytest.raises(ParameterError):
        parse_float_list(" , ")
