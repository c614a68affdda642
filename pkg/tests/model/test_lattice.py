# coding=utf-8

import numpy as np
import pytest

from tpst.model import Geometry, boundary_cycles, build_lattice, dangling_pairs
from tpst.model.lattice import LINK_TYPES
from tpst.utils.errors import ConfigError, PreconditionError


def _signed_area(lattice, plaquette):
    pts = np.array([lattice.sites[s].position for s in plaquette.sites])
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


@pytest.mark.parametrize("ly,lx", [(3, 3), (4, 5)])
def test_torus_counts(ly, lx):
    lattice = build_lattice(Geometry("torus", ly, lx))
    assert lattice.n_sites == 6 * ly * lx
    assert lattice.n_links == 9 * ly * lx
    assert len(lattice.plaquettes_of_kind("triangle")) == 2 * ly * lx
    assert len(lattice.plaquettes_of_kind("dodecagon")) == ly * lx
    assert lattice.dangling == {}
    assert set(lattice.coordination()) == {3}


def test_torus_every_link_bounds_two_plaquettes():
    lattice = build_lattice(Geometry("torus", 4, 4))
    owners = [0] * lattice.n_links
    for p in lattice.plaquettes:
        for l in p.links:
            owners[l] += 1
    assert set(owners) == {2}


def test_link_types_and_flavors():
    lattice = build_lattice(Geometry("torus", 3, 3))
    for link in lattice.links:
        assert link.link_type in LINK_TYPES
    # 每个位点恰好连出三种不同的味
    for site in range(lattice.n_sites):
        flavors = sorted(lattice.links[l].flavor for l in lattice.links_of(site))
        assert flavors == ["x", "y", "z"]


def test_plaquettes_are_counterclockwise():
    lattice = build_lattice(Geometry("droplet", 4, 4))
    for p in lattice.plaquettes:
        if p.kind in ("triangle", "dodecagon"):
            assert _signed_area(lattice, p) > 0
            assert len(p.sites) == (3 if p.kind == "triangle" else 12)


def test_plaquette_links_follow_site_cycle():
    lattice = build_lattice(Geometry("droplet", 4, 4))
    for p in lattice.plaquettes_of_kind("dodecagon"):
        n = len(p.sites)
        for k in range(n):
            link = lattice.links[p.links[k]]
            assert {link.i, link.j} == {p.sites[k], p.sites[(k + 1) % n]}


@pytest.mark.parametrize("ly,lx", [(1, 1), (4, 4), (10, 10)])
def test_droplet_dangling_sites(ly, lx):
    lattice = build_lattice(Geometry("droplet", ly, lx))
    coordination = lattice.coordination()
    assert len(lattice.dangling) == 2 * (ly + lx)
    for site, flavor in lattice.dangling.items():
        assert coordination[site] == 2
        present = {lattice.links[l].flavor for l in lattice.links_of(site)}
        assert flavor not in present
    assert all(coordination[s] == 3 for s in range(lattice.n_sites) if s not in lattice.dangling)


def test_droplet_single_boundary_cycle():
    lattice = build_lattice(Geometry("droplet", 6, 6))
    cycles = boundary_cycles(lattice)
    assert len(cycles) == 1
    assert sorted(cycles[0]) == sorted(lattice.dangling)


def test_dangling_pairs_cover_boundary():
    lattice = build_lattice(Geometry("droplet", 6, 6))
    pairs = dangling_pairs(lattice)
    paired = [s for p in pairs for s in (p.site_a, p.site_b)]
    assert sorted(paired) == sorted(lattice.dangling)
    for pair in pairs:
        assert pair.chain[0] == pair.site_a and pair.chain[-1] == pair.site_b
        assert len(pair.chain_links) == len(pair.chain) - 1


def test_dangling_pairs_skip_reserved_sites():
    lattice = build_lattice(Geometry("droplet", 6, 6))
    a = lattice.site_index(5, 3, "A_x")
    b = lattice.site_index(0, 3, "B_x")
    pairs = dangling_pairs(lattice, reserved=(a, b))
    paired = {s for p in pairs for s in (p.site_a, p.site_b)}
    assert a not in paired and b not in paired
    assert len(paired) == len(lattice.dangling) - 2


def test_reserved_site_must_be_dangling():
    lattice = build_lattice(Geometry("droplet", 4, 4))
    bulk = lattice.site_index(1, 1, "A_z")
    with pytest.raises(PreconditionError):
        dangling_pairs(lattice, reserved=(bulk,))


def test_default_injection_sites_are_x_dangling():
    lattice = build_lattice(Geometry("droplet", 10, 10))
    assert lattice.dangling[lattice.site_index(9, 5, "A_x")] == "x"
    assert lattice.dangling[lattice.site_index(0, 5, "B_x")] == "x"


def test_cylinder_has_two_boundaries():
    lattice = build_lattice(Geometry("cylinder", 6, 4))
    assert len(boundary_cycles(lattice)) == 2
    assert len(lattice.plaquettes_of_kind("dodecagon")) == 6 * 3


def test_site_index_wraps_on_periodic_axis():
    lattice = build_lattice(Geometry("torus", 4, 4))
    assert lattice.site_index(4, 0, "A_x") == lattice.site_index(0, 0, "A_x")
    assert lattice.site_index(-1, 5, 2) == lattice.site_index(3, 1, 2)


def test_site_index_outside_droplet():
    lattice = build_lattice(Geometry("droplet", 3, 3))
    with pytest.raises(PreconditionError):
        lattice.site_index(3, 0, "A_x")


def test_link_between_missing():
    lattice = build_lattice(Geometry("droplet", 3, 3))
    with pytest.raises(PreconditionError):
        lattice.link_between(0, lattice.n_sites - 1)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"kind": "sphere", "ly": 2, "lx": 2},
        {"kind": "torus", "ly": 0, "lx": 2},
        {"kind": "cylinder", "ly": 2, "lx": 2, "boundary": "armchair"},
    ],
)
def test_invalid_geometry(kwargs):
    with pytest.raises(ConfigError):
        Geometry(**kwargs)


def test_serialization_is_deterministic():
    first = build_lattice(Geometry("droplet", 3, 4)).to_json()
    second = build_lattice(Geometry("droplet", 3, 4)).to_json()
    assert first == second
    geometry = Geometry.from_dict(Geometry("cylinder", 5, 2).to_dict())
    assert geometry == Geometry("cylinder", 5, 2)
