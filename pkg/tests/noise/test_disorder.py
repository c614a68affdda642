# coding=utf-8

import numpy as np
import pytest

from tpst.model import Geometry, build_lattice, flux_pattern, ground_gauge
from tpst.noise import DisorderSpec, disorder_sweep, disordered_gauge, link_jitter, realization
from tpst.transfer import RegisterSetup
from tpst.utils.errors import PreconditionError


@pytest.fixture(scope="module")
def droplet():
    return build_lattice(Geometry("droplet", 14, 14))


def test_jitter_is_deterministic(droplet):
    first = link_jitter(droplet, 0.01, seed=7)
    assert np.array_equal(first, link_jitter(droplet, 0.01, seed=7))
    assert not np.array_equal(first, link_jitter(droplet, 0.01, seed=8))
    assert np.all(np.abs(first) <= 0.01)
    assert not np.any(link_jitter(droplet, 0.0, seed=7))


def test_bulk_pairs_place_dodecagon_vortices(droplet):
    spec = DisorderSpec(kind="bulk_pairs", min_distance=3.0)
    flux = flux_pattern(disordered_gauge(droplet, spec, seed=1))
    assert flux.vortex_count == 2
    assert len(flux.vortices("dodecagon")) == 2
    assert disordered_gauge(droplet, spec, seed=1) == disordered_gauge(droplet, spec, seed=1)


def test_no_bulk_room():
    small = build_lattice(Geometry("droplet", 4, 4))
    with pytest.raises(PreconditionError) as exc:
        disordered_gauge(small, DisorderSpec(kind="bulk_pairs", min_distance=5.0), seed=0)
    assert exc.value.code == "NO_BULK_ROOM"


def test_edge_vortex_flips_one_boundary_link(droplet):
    gauge = disordered_gauge(droplet, DisorderSpec(kind="edge_vortex"), seed=3)
    changed = np.flatnonzero(gauge.as_array() != ground_gauge(droplet).as_array())
    assert len(changed) == 1
    arc_links = {
        droplet.link_between(arc[k], arc[k + 1])
        for arc in droplet.boundary_arcs
        for k in range(len(arc) - 1)
    }
    assert int(changed[0]) in arc_links


def test_realization_with_jitter(droplet):
    spectrum = realization(droplet, DisorderSpec(strength=1e-3), seed=2)
    assert spectrum.n_modes == droplet.n_sites // 2


def test_invalid_spec():
    with pytest.raises(PreconditionError):
        DisorderSpec(kind="random")
    with pytest.raises(PreconditionError):
        DisorderSpec(strength=-0.1)
    with pytest.raises(PreconditionError):
        DisorderSpec(retune="phase")


def _setup(lattice):
    a = lattice.site_index(13, 7, "A_x")
    b = lattice.site_index(0, 7, "B_x")
    return RegisterSetup.for_lattice(lattice, 1.0, a, b)


@pytest.mark.slow
def test_weak_jitter_barely_hurts(droplet):
    result = disorder_sweep(droplet, _setup(droplet), DisorderSpec(strength=1e-3), seeds=range(5),
                            ratio=0.05, samples=11, jobs=1, verbose=False)
    assert result.median_drop < 0.01
    assert len(result.rows()) == 5


@pytest.mark.slow
def test_edge_vortex_spoils_transfer(droplet):
    result = disorder_sweep(droplet, _setup(droplet), DisorderSpec(kind="edge_vortex"), seeds=range(5),
                            ratio=0.05, samples=11, jobs=1, verbose=False)
    assert result.median_drop > 0.05


def test_empty_seed_list(droplet):
    with pytest.raises(PreconditionError):
        disorder_sweep(droplet, _setup(droplet), DisorderSpec(), seeds=[], verbose=False)
