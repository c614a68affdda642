# coding=utf-8

import pytest

from tpst.model import (
    GaugeConfig,
    Geometry,
    build_lattice,
    dual_path,
    flux_pattern,
    gauge_transform,
    ground_gauge,
    insert_vortex_pair,
    is_translation_invariant,
    reverse_triangle_fluxes,
)
from tpst.utils.errors import InvalidPathError, PreconditionError


@pytest.fixture(scope="module")
def torus():
    return build_lattice(Geometry("torus", 4, 4))


@pytest.fixture(scope="module")
def droplet():
    return build_lattice(Geometry("droplet", 6, 6))


def test_ground_sector_is_flux_free(torus, droplet):
    for lattice in (torus, droplet):
        assert flux_pattern(ground_gauge(lattice)).vortex_count == 0


def test_ground_gauge_pairs_dangling_sites(droplet):
    gauge = ground_gauge(droplet)
    assert len(gauge.extra) == len(droplet.dangling) // 2
    assert all(sign == 1 for _, _, sign in gauge.extra)


def test_sign_is_antisymmetric(torus):
    gauge = ground_gauge(torus).flip_links([0, 5])
    for link in torus.links[:12]:
        assert gauge.sign(link.i, link.j) == -gauge.sign(link.j, link.i)


def test_vortex_pair_flips_only_endpoints(torus):
    dodecagons = torus.plaquettes_of_kind("dodecagon")
    start, end = dodecagons[0].index, dodecagons[6].index
    path = dual_path(torus, start, end)
    assert path.plaquettes[0] == start and path.plaquettes[-1] == end
    gauge = insert_vortex_pair(ground_gauge(torus), path)
    assert sorted(flux_pattern(gauge).vortices()) == sorted([start, end])


def test_vortex_pair_from_plaquette_sequence(torus):
    path = dual_path(torus, torus.plaquettes_of_kind("triangle")[0].index,
                     torus.plaquettes_of_kind("triangle")[9].index)
    gauge = insert_vortex_pair(ground_gauge(torus), list(path.plaquettes))
    assert flux_pattern(gauge).vortices("triangle") == sorted([path.plaquettes[0], path.plaquettes[-1]])


def test_dual_path_is_deterministic(torus):
    first = dual_path(torus, 0, 30)
    second = dual_path(torus, 0, 30)
    assert first == second
    assert first.length == len(first.plaquettes) - 1


def test_non_adjacent_steps_rejected(torus):
    far = torus.plaquettes_of_kind("dodecagon")[10].index
    with pytest.raises(InvalidPathError) as exc:
        insert_vortex_pair(ground_gauge(torus), [0, far])
    assert exc.value.code == "INVALID_DUAL_PATH"
    assert exc.value.exit_code == 3


def test_reverse_triangle_fluxes(torus):
    flux = flux_pattern(reverse_triangle_fluxes(ground_gauge(torus)))
    for value, kind in zip(flux.w, flux.kinds):
        assert value == (-1 if kind == "triangle" else 1)


def test_gauge_transform_keeps_fluxes(droplet):
    gauge = ground_gauge(droplet).flip_links([3])
    transformed = gauge_transform(gauge, [0, 7, 11, 20])
    assert transformed.signs != gauge.signs
    assert flux_pattern(transformed).w == flux_pattern(gauge).w


def test_serialization_round_trip(droplet):
    gauge = ground_gauge(droplet).flip_links([2, 9])
    data = gauge.to_dict()
    assert data["deltas"] == [[2, -1], [9, -1]]
    assert GaugeConfig.from_dict(droplet, data) == gauge


def test_from_dict_rejects_unknown_link(droplet):
    with pytest.raises(PreconditionError):
        GaugeConfig.from_dict(droplet, {"deltas": [[droplet.n_links, -1]]})


def test_invalid_sign_count(torus):
    with pytest.raises(PreconditionError):
        GaugeConfig(torus, (1,) * (torus.n_links - 1))


def test_translation_invariance_on_cylinder():
    lattice = build_lattice(Geometry("cylinder", 5, 3))
    gauge = ground_gauge(lattice)
    assert is_translation_invariant(gauge, axes=(0,))
    assert is_translation_invariant(reverse_triangle_fluxes(gauge), axes=(0,))
    assert not is_translation_invariant(gauge.flip_links([0]), axes=(0,))
