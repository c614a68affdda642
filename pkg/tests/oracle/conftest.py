# coding=utf-8

import pytest

from tpst.model import Geometry, build_lattice
from tpst.oracle import build_cluster
from tpst.transfer import RegisterSetup


@pytest.fixture(scope="module")
def unit_droplet():
    return build_lattice(Geometry("droplet", 1, 1))


@pytest.fixture(scope="module")
def register_cluster(unit_droplet):
    setup = RegisterSetup.for_lattice(
        unit_droplet, 1.0, unit_droplet.site_index(0, 0, "A_x"), unit_droplet.site_index(0, 0, "B_y")
    )
    return build_cluster(unit_droplet, 1.0, registers=setup)
