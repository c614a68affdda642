# coding=utf-8

import pytest

from tpst.core import load_config
from tpst.utils.errors import ConfigError

from tests.conftest import DEFAULT_CONFIG


def test_default_config_loads():
    config = load_config(str(DEFAULT_CONFIG))
    assert set(config) == {"CONFIG_PATH", "CONFIG_HASH", "LATTICE", "FERMION", "TRANSFER", "NOISE", "ORACLE", "OUTPUT"}
    assert config["LATTICE"]["KIND"] == "cylinder"
    assert config["TRANSFER"]["DOT"]["SITE_A"] is None
    assert config["NOISE"]["MODEL"]["bath"] == "thermal"
    assert config["ORACLE"]["SPIN_CAP"] == 14


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(str(tmp_path / "absent.yaml"))


def test_invalid_yaml(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("lattice: [ly: 3\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_empty_file_uses_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("", encoding="utf-8")
    config = load_config(str(path))
    assert config["LATTICE"]["LY"] == 61
    assert config["OUTPUT"]["DIR"] == "output"


def test_environment_overrides(write_config, monkeypatch, tmp_path):
    path = write_config()
    monkeypatch.setenv("TPST_OUTPUT_DIR", str(tmp_path / "elsewhere"))
    monkeypatch.setenv("TPST_JOBS", "3")
    monkeypatch.setenv("TPST_SEED", "not-a-number")
    config = load_config(path)
    assert config["OUTPUT"]["DIR"] == str(tmp_path / "elsewhere")
    assert config["OUTPUT"]["JOBS"] == 3
    assert config["OUTPUT"]["SEED"] == 0


def test_config_path_from_environment(write_config, monkeypatch):
    path = write_config({"lattice": {"ly": 7}})
    monkeypatch.setenv("CONFIG_PATH", path)
    config = load_config()
    assert config["LATTICE"]["LY"] == 7
    assert config["CONFIG_PATH"] == path


def test_site_lists_become_tuples(write_config):
    config = load_config(write_config({"transfer": {"dot": {"site_a": [9, 4, "A_x"]}}}))
    assert config["TRANSFER"]["DOT"]["SITE_A"] == (9, 4, "A_x")
