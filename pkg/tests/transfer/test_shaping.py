# coding=utf-8

import numpy as np
import pytest
from scipy.integrate import trapezoid

from tpst.fermion import band_structure, bloch_spectrum, chern_number, edge_channel
from tpst.model import Geometry, build_lattice, ground_gauge
from tpst.transfer import (
    RegisterSetup,
    absorbed_profile,
    arrival_time,
    coupling_velocity,
    cylinder_length,
    droplet_plan,
    edge_route,
    emitted_profile,
    exponential_profile,
    gaussian_profile,
    lamb_coefficient,
    local_density,
    run_droplet_transfer,
)
from tpst.utils.errors import ChiralityError, PreconditionError

LENGTH = 600
DELTA_S = np.pi / 2
SIGMA = 20.0
CENTER = 5 * SIGMA
DT = 0.5

EDGE_DELTA_S = 0.2
EDGE_LX = 5
ARC = 8
EDGE_DT = 1.0
EDGE_G_MAX = 1.5


@pytest.fixture(scope="module")
def ring():
    return edge_channel(LENGTH, 1.0)


@pytest.fixture(scope="module")
def topology():
    """61x40 圆柱能带 + 3x3 环面 Chern 数，edge_velocity 为底边群速度"""
    reference = build_lattice(Geometry("cylinder", 61, 40))
    bands = band_structure(reference, ground_gauge(reference), jobs=1, verbose=False)
    torus = build_lattice(Geometry("torus", 3, 3))
    return chern_number(torus, ground_gauge(torus), grid=24, bands=bands)


@pytest.fixture(scope="module")
def cylinder_edge(topology):
    velocity = topology.edge_velocity
    lattice = build_lattice(Geometry("cylinder", cylinder_length(velocity, SIGMA, ARC), EDGE_LX))
    spectrum = bloch_spectrum(lattice, ground_gauge(lattice), jobs=1, verbose=False)
    return lattice, spectrum, edge_route(lattice, velocity, ARC)


def _grid(delay, dt=DT):
    return np.arange(0.0, CENTER + delay + 5 * SIGMA + 0.5 * dt, dt)


def _relative_error(trace, plan):
    target = np.interp(trace.times, plan.times, np.abs(plan.profile))
    residual = trapezoid((emitted_profile(trace) - target) ** 2, trace.times)
    return float(np.sqrt(residual / trapezoid(target ** 2, trace.times)))


def test_profiles_are_normalized():
    times = np.arange(0.0, 400.0, 0.5)
    assert trapezoid(gaussian_profile(times, 200.0, 20.0) ** 2, times) == pytest.approx(1.0, rel=1e-6)
    assert trapezoid(exponential_profile(times, 0.05) ** 2, times) == pytest.approx(1.0, rel=1e-3)
    assert exponential_profile(np.array([-1.0]), 0.05)[0] == 0.0


def test_ring_coupling_velocity(ring):
    assert local_density(ring, 0, DELTA_S, 0.25 * DELTA_S) == pytest.approx(1 / (2 * np.pi), rel=1e-9)
    assert coupling_velocity(ring, 0, DELTA_S, 0.25 * DELTA_S) == pytest.approx(2.0, rel=1e-9)


def test_exponential_emission_pulse_is_flat(ring):
    setup = RegisterSetup(delta_s=DELTA_S, site_a=0, site_b=150)
    times = np.arange(0.0, 400.0 + 0.25, 0.5)
    plan = droplet_plan(ring, setup, times, exponential_profile(times, 0.05), velocity=1.0, arc_length=150,
                        verbose=False)
    early = times <= 100
    np.testing.assert_allclose(plan.emission.samples[early], np.sqrt(2.0 * 0.05), rtol=1e-3)
    assert plan.edge_length == pytest.approx(LENGTH)
    assert plan.delay == pytest.approx(150.0)
    assert plan.h[-1] > 0


def test_pulses_respect_cap(ring):
    setup = RegisterSetup(delta_s=DELTA_S, site_a=0, site_b=150)
    times = _grid(150.0)
    plan = droplet_plan(ring, setup, times, gaussian_profile(times, CENTER, SIGMA), 1.0, 150, g_max=0.1,
                        verbose=False)
    assert plan.emission.peak <= 0.1 + 1e-12
    assert plan.retrieval.peak <= 0.1 + 1e-12
    assert plan.emission.capped_fraction > 0


def test_retrieval_too_early_is_rejected(ring):
    setup = RegisterSetup(delta_s=DELTA_S, site_a=150, site_b=0)
    times = _grid(150.0)
    with pytest.raises(ChiralityError) as exc:
        droplet_plan(ring, setup, times, gaussian_profile(times, CENTER, SIGMA), 1.0, 450, delay=150.0,
                     verbose=False)
    assert exc.value.code == "CHIRALITY_BLOCKED"


def test_plan_input_checks(ring):
    setup = RegisterSetup(delta_s=DELTA_S, site_a=0, site_b=150)
    times = _grid(150.0)
    profile = gaussian_profile(times, CENTER, SIGMA)
    with pytest.raises(PreconditionError):
        droplet_plan(ring, setup, times, profile, velocity=0.0, arc_length=150, verbose=False)
    with pytest.raises(PreconditionError):
        droplet_plan(ring, setup, times[:2], profile[:2], 1.0, 150, verbose=False)
    with pytest.raises(PreconditionError):
        droplet_plan(ring, setup, times, profile, 1.0, 150, delay=times[-1] + 10, verbose=False)
    with pytest.raises(PreconditionError):
        local_density(ring, 0, DELTA_S, 1e-4)


def test_ring_has_no_register_shift(ring):
    assert lamb_coefficient(ring, 0, DELTA_S, 0.25 * DELTA_S) == pytest.approx(0.0, abs=1e-12)
    # 带下半部：上方模式更多，能移为负
    assert lamb_coefficient(ring, 0, 0.5 * DELTA_S, 0.125 * DELTA_S) < 0


def test_off_center_pulses_carry_phase(ring):
    setup = RegisterSetup(delta_s=0.5 * DELTA_S, site_a=0, site_b=150)
    times = _grid(150.0)
    profile = gaussian_profile(times, CENTER, SIGMA)
    plan = droplet_plan(ring, setup, times, profile, 1.0, 150, verbose=False)
    assert plan.lamb_a < 0 and plan.lamb_a == pytest.approx(plan.lamb_b)
    np.testing.assert_allclose(
        plan.emission.phase[-1], plan.lamb_a * trapezoid(plan.emission.samples ** 2, times), rtol=1e-12
    )
    assert np.all(np.diff(plan.emission.phase) <= 0)
    assert plan.emission.to_dict()["phase_span"] > 0

    bare = droplet_plan(ring, setup, times, profile, 1.0, 150, compensate=False, verbose=False)
    assert bare.emission.phase is None and bare.lamb_a == 0.0
    np.testing.assert_allclose(bare.emission.samples, plan.emission.samples)


def test_edge_route_follows_chirality():
    lattice = build_lattice(Geometry("cylinder", 31, 3))
    forward = edge_route(lattice, 0.5, 6, upstream_cells=4)
    backward = edge_route(lattice, -0.5, 6, upstream_cells=4)
    i_a = lattice.sites[forward.site_a].cell[0]
    assert lattice.sites[forward.site_b].cell == ((i_a + 6) % 31, 0)
    assert lattice.sites[backward.site_b].cell == ((i_a - 6) % 31, 0)
    for route in (forward, backward):
        assert lattice.dangling[route.site_a] == lattice.dangling[route.site_b] == "y"
        assert len(route.upstream) == 4 * 3 * 6
    upstream_cells = {lattice.sites[s].cell[0] for s in forward.upstream}
    assert upstream_cells == {(i_a - m) % 31 for m in range(6, 10)}
    swapped = forward.reversed(31)
    assert (swapped.site_a, swapped.site_b, swapped.arc_length) == (forward.site_b, forward.site_a, 25.0)


def test_edge_route_checks():
    lattice = build_lattice(Geometry("cylinder", 11, 3))
    with pytest.raises(PreconditionError):
        edge_route(lattice, 0.5, 8, upstream_cells=4)
    with pytest.raises(PreconditionError):
        edge_route(lattice, 0.0, 2)
    droplet = build_lattice(Geometry("droplet", 4, 4))
    with pytest.raises(PreconditionError):
        edge_route(droplet, 0.5, 2)


def test_cylinder_length_is_odd_and_long_enough():
    ly = cylinder_length(0.5, SIGMA, ARC)
    assert ly % 2 == 1
    assert ly > 10 + 2 * ARC + 10 * SIGMA * 0.5
    assert cylinder_length(-0.5, SIGMA, ARC) == ly


@pytest.mark.slow
def test_ring_wavepacket_transfer(ring):
    setup = RegisterSetup(delta_s=DELTA_S, site_a=0, site_b=150)
    times = _grid(150.0)
    plan = droplet_plan(ring, setup, times, gaussian_profile(times, CENTER, SIGMA), 1.0, 150,
                        g_max=DELTA_S, eps_res=1e-6, verbose=False)
    trace = run_droplet_transfer(ring, plan, region=range(450, LENGTH), verbose=False)
    assert trace.fidelity >= 0.95
    assert _relative_error(trace, plan) < 1e-2
    assert np.max(trace.region_prob) < 1e-3
    assert arrival_time(trace, absorbed_profile(trace)) == pytest.approx(CENTER + 150.0, abs=2 * DT)


@pytest.mark.slow
def test_wrong_direction_never_arrives(ring):
    setup = RegisterSetup(delta_s=DELTA_S, site_a=150, site_b=0)
    times = _grid(150.0)
    plan = droplet_plan(ring, setup, times, gaussian_profile(times, CENTER, SIGMA), 1.0, 450, delay=150.0,
                        g_max=DELTA_S, eps_res=1e-6, strict=False, verbose=False)
    trace = run_droplet_transfer(ring, plan, verbose=False)
    assert trace.fidelity < 0.1


@pytest.mark.slow
def test_cylinder_edge_setup(topology, cylinder_edge):
    lattice, spectrum, route = cylinder_edge
    assert abs(topology.chern) == 1
    assert np.sign(route.direction) == np.sign(topology.edge_velocity)
    setup = RegisterSetup.for_lattice(lattice, EDGE_DELTA_S, route.site_a, route.site_b).validate(lattice)
    assert setup.flavor_beta == setup.flavor_eta == "y"
    # 平移不变：a、b 处局域态密度相同
    half_width = 0.25 * EDGE_DELTA_S
    assert coupling_velocity(spectrum, route.site_a, EDGE_DELTA_S, half_width) == pytest.approx(
        coupling_velocity(spectrum, route.site_b, EDGE_DELTA_S, half_width), rel=1e-8
    )


@pytest.mark.slow
def test_cylinder_edge_transfer(topology, cylinder_edge):
    lattice, spectrum, route = cylinder_edge
    velocity = abs(topology.edge_velocity)
    delay = route.arc_length / velocity
    setup = RegisterSetup.for_lattice(lattice, EDGE_DELTA_S, route.site_a, route.site_b)
    times = _grid(delay, EDGE_DT)
    plan = droplet_plan(spectrum, setup, times, gaussian_profile(times, CENTER, SIGMA), velocity,
                        route.arc_length, g_max=EDGE_G_MAX, eps_res=1e-6, verbose=False)
    assert plan.delay == pytest.approx(delay)
    trace = run_droplet_transfer(spectrum, plan, region=route.upstream, verbose=False)
    assert trace.fidelity >= 0.95
    assert np.max(trace.region_prob) < 1e-3
    assert arrival_time(trace) == pytest.approx(CENTER + delay, abs=2 * EDGE_DT)


@pytest.mark.slow
def test_cylinder_edge_against_chirality(topology, cylinder_edge):
    lattice, spectrum, route = cylinder_edge
    velocity = abs(topology.edge_velocity)
    against = route.reversed(lattice.geometry.ly)
    setup = RegisterSetup.for_lattice(lattice, EDGE_DELTA_S, against.site_a, against.site_b)
    delay = route.arc_length / velocity
    times = _grid(delay, EDGE_DT)
    profile = gaussian_profile(times, CENTER, SIGMA)
    with pytest.raises(ChiralityError):
        droplet_plan(spectrum, setup, times, profile, velocity, against.arc_length, delay=delay, verbose=False)
    plan = droplet_plan(spectrum, setup, times, profile, velocity, against.arc_length, delay=delay,
                        g_max=EDGE_G_MAX, eps_res=1e-6, strict=False, verbose=False)
    trace = run_droplet_transfer(spectrum, plan, verbose=False)
    assert trace.fidelity < 0.1
