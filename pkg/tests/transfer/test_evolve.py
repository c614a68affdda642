# coding=utf-8

import numpy as np
import pytest

from tpst.fermion import edge_channel
from tpst.transfer import Pulse, RegisterSetup, dot_plan, evolve, evolve_block, extend_hamiltonian, step_size
from tpst.utils.errors import PreconditionError


@pytest.fixture(scope="module")
def static_ham(dot_droplet):
    _, spectrum, setup = dot_droplet
    plan = dot_plan(spectrum, setup, ratio=0.05, verbose=False)
    return extend_hamiltonian(spectrum, plan.setup, "secular")


@pytest.fixture(scope="module")
def ring():
    return edge_channel(40, 1.0)


def test_methods_agree_on_static_problem(static_ham):
    reference = evolve(static_ham, "L", 20.0, method="exact", samples=5, verbose=False)
    split = evolve(static_ham, "L", 20.0, method="split4", verbose=False)
    rk4 = evolve(static_ham, "L", 20.0, method="rk4", tolerance=1e-5, verbose=False)
    for trace in (split, rk4):
        assert abs(trace.amp_l[-1] - reference.amp_l[-1]) < 1e-5
        assert abs(trace.amp_r[-1] - reference.amp_r[-1]) < 1e-5
    assert split.norm_drift < 1e-8


def test_split_and_rk4_agree_with_pulse(ring):
    pulse = Pulse(times=np.linspace(0.0, 20.0, 41), samples=np.linspace(0.0, 0.2, 41), g_max=0.5)
    setup = RegisterSetup(delta_s=np.pi / 2, site_a=0, site_b=10, g_l=pulse, g_r=0.05)
    ham = extend_hamiltonian(ring, setup, "secular")
    split = evolve(ham, "L", 20.0, method="split4", verbose=False)
    rk4 = evolve(ham, "L", 20.0, method="rk4", tolerance=1e-5, verbose=False)
    assert abs(split.amp_l[-1] - rk4.amp_l[-1]) < 1e-5
    assert abs(split.amp_r[-1] - rk4.amp_r[-1]) < 1e-5


def test_full_form_exact_and_split_agree(ring):
    setup = RegisterSetup(delta_s=np.pi / 2, site_a=0, site_b=10, g_l=0.1, g_r=0.1)
    ham = extend_hamiltonian(ring, setup, "full")
    exact = evolve(ham, "L", 10.0, method="exact", samples=3, verbose=False)
    split = evolve(ham, "L", 10.0, method="split4", verbose=False)
    assert exact.norm[0] == pytest.approx(1.0)
    assert abs(exact.amp_l[-1] - split.amp_l[-1]) < 1e-5
    assert abs(exact.amp_r[-1] - split.amp_r[-1]) < 1e-5


def test_block_is_unitary_in_secular_form(static_ham):
    _, block = evolve_block(static_ham, 10.0, method="exact", samples=2, verbose=False)
    assert block.shape == (2, 2)
    assert np.all(np.sum(np.abs(block) ** 2, axis=0) <= 1.0 + 1e-10)


def test_region_probability(ring):
    setup = RegisterSetup(delta_s=np.pi / 2, site_a=0, site_b=10, g_l=0.2, g_r=0.0)
    ham = extend_hamiltonian(ring, setup, "secular")
    trace = evolve(ham, "L", 10.0, method="exact", samples=4, region=range(40), verbose=False)
    np.testing.assert_allclose(trace.region_prob, trace.edge_prob, atol=1e-10)


def test_step_rule(static_ham):
    limit = step_size(static_ham)
    assert limit * static_ham.norm_bound() == pytest.approx(0.05)
    assert step_size(static_ham, dt=10.0, verbose=False) == limit
    assert step_size(static_ham, dt=limit / 2) == limit / 2


def test_invalid_requests(static_ham, ring):
    with pytest.raises(PreconditionError):
        evolve(static_ham, "L", 1.0, method="euler")
    with pytest.raises(PreconditionError):
        evolve(static_ham, "L", 0.0)
    with pytest.raises(PreconditionError):
        evolve(static_ham, "X", 1.0)
    with pytest.raises(PreconditionError):
        evolve(static_ham, np.zeros(3), 1.0)
    pulse = Pulse(times=[0.0, 1.0], samples=[0.0, 0.1], g_max=0.5)
    pulsed = extend_hamiltonian(ring, RegisterSetup(delta_s=1.0, site_a=0, site_b=5, g_l=pulse), "secular")
    with pytest.raises(PreconditionError):
        evolve(pulsed, "L", 1.0, method="exact")
