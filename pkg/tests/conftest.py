# coding=utf-8
"""
测试公共夹具
"""

import copy
from pathlib import Path

import pytest
import yaml

from tpst.fermion import assemble, diagonalize
from tpst.model import Geometry, build_lattice, ground_gauge
from tpst.transfer import RegisterSetup

ROOT = Path(__file__).resolve().parents[1]
DEFAULT_CONFIG = ROOT / "config" / "config.yaml"


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    for key in ("CONFIG_PATH", "TPST_OUTPUT_DIR", "TPST_JOBS", "TPST_SEED"):
        monkeypatch.delenv(key, raising=False)


def _merge(base: dict, overrides: dict) -> dict:
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(base.get(key), dict):
            _merge(base[key], value)
        else:
            base[key] = value
    return base


@pytest.fixture
def default_document():
    with open(DEFAULT_CONFIG, "r", encoding="utf-8") as f:
        return yaml.safe_load(f)


@pytest.fixture
def write_config(tmp_path, default_document):
    """在默认配置上叠加覆盖项并写到临时目录，返回路径"""

    def write(overrides=None, name="config.yaml"):
        document = _merge(copy.deepcopy(default_document), overrides or {})
        document.setdefault("output", {})["dir"] = str(tmp_path / "out")
        document["output"]["jobs"] = 1
        path = tmp_path / name
        path.write_text(yaml.safe_dump(document, allow_unicode=True), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture(scope="session")
def dot_droplet():
    """10x10 液滴、基态谱与默认注入位点"""
    lattice = build_lattice(Geometry("droplet", 10, 10))
    spectrum = diagonalize(assemble(lattice, ground_gauge(lattice), 1.0))
    site_a = lattice.site_index(9, 5, "A_x")
    site_b = lattice.site_index(0, 5, "B_x")
    setup = RegisterSetup.for_lattice(lattice, 1.0, site_a, site_b).validate(lattice)
    return lattice, spectrum, setup
