# coding=utf-8

import pytest

from tpst.core import config_hash, validate_config
from tpst.utils.errors import ConfigError


def test_empty_document():
    assert validate_config(None) == {}


def test_default_document_is_valid(default_document):
    assert validate_config(default_document) is default_document


def test_unknown_key_is_named():
    with pytest.raises(ConfigError) as exc:
        validate_config({"transfer": {"dot": {"ratoi": 0.05}}})
    assert "transfer.dot.ratoi" in exc.value.message
    assert exc.value.exit_code == 2
    assert exc.value.code == "CONFIG_ERROR"


@pytest.mark.parametrize(
    "document",
    [
        {"lattice": {"ly": True}},
        {"lattice": {"ly": 0}},
        {"lattice": {"kind": "sphere"}},
        {"lattice": {"kappa": "1"}},
        {"transfer": {"droplet": {"ring": {"length": 7}}}},
        {"transfer": {"droplet": {"ly": 8}}},
        {"transfer": {"droplet": {"channel": "ribbon"}}},
        {"noise": {"momenta": []}},
        {"output": {"seed": None}},
        {"fermion": {"vortex": {"species": ["hexagon"]}}},
        {"lattice": []},
    ],
)
def test_invalid_leaves(document):
    with pytest.raises(ConfigError):
        validate_config(document)


def test_nullable_fields():
    validate_config({
        "transfer": {"dot": {"site_a": None, "ratio": None}, "droplet": {"ly": None, "g_max": None}},
        "output": {"jobs": None},
    })


def test_hash_is_order_independent():
    first = config_hash({"lattice": {"ly": 4, "lx": 5}, "output": {"seed": 1}})
    second = config_hash({"output": {"seed": 1}, "lattice": {"lx": 5, "ly": 4}})
    assert first == second
    assert len(first) == 12
    assert config_hash({"lattice": {"ly": 4, "lx": 6}}) != config_hash({"lattice": {"ly": 4, "lx": 5}})
