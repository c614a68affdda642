# coding=utf-8

import pytest

from tpst.fermion import bloch_bulk_gap, chern_number
from tpst.model import Geometry, build_lattice, ground_gauge, reverse_triangle_fluxes
from tpst.utils.errors import PreconditionError


@pytest.fixture(scope="module")
def torus():
    return build_lattice(Geometry("torus", 3, 3))


@pytest.fixture(scope="module")
def ground(torus):
    return chern_number(torus, ground_gauge(torus), grid=24)


def test_chern_is_quantized(ground):
    assert abs(ground.chern) == 1
    assert ground.quantization_defect < 1e-6
    assert set(ground.history) >= {24, 48}


def test_reversed_triangles_negate_chern(torus, ground):
    reversed_result = chern_number(torus, reverse_triangle_fluxes(ground_gauge(torus)), grid=24)
    assert reversed_result.chern == -ground.chern


def test_result_serializes(ground):
    data = ground.to_dict()
    assert data["chern"] == ground.chern
    assert data["edge_velocity"] is None
    assert list(data["history"]) == sorted(data["history"], key=int)


def test_bloch_gap_bounds_bulk_gap(torus):
    gap = bloch_bulk_gap(torus, ground_gauge(torus), grid=6)
    assert gap > 0.4


def test_requires_torus():
    droplet = build_lattice(Geometry("droplet", 3, 3))
    with pytest.raises(PreconditionError):
        chern_number(droplet, ground_gauge(droplet))
    with pytest.raises(PreconditionError):
        bloch_bulk_gap(droplet, ground_gauge(droplet))
