# coding=utf-8

import numpy as np
import pytest

from tpst.transfer import (
    detuned,
    dot_plan,
    gate_extract,
    run_dot_transfer,
    select_mode,
    three_mode_propagator,
)
from tpst.utils.errors import PreconditionError


@pytest.fixture(scope="module")
def plan(dot_droplet):
    _, spectrum, setup = dot_droplet
    return dot_plan(spectrum, setup, ratio=0.05, verbose=False)


def test_plan_is_balanced(dot_droplet, plan):
    _, spectrum, _ = dot_droplet
    assert plan.mode_index == select_mode(spectrum, plan.setup.site_a, plan.setup.site_b)
    assert plan.setup.delta_s == plan.mode_energy
    assert plan.g_l * abs(plan.q_a) == pytest.approx(plan.g_r * abs(plan.q_b))
    assert plan.resolvability == pytest.approx(0.05)
    assert plan.transfer_time == pytest.approx(np.pi / (np.sqrt(2) * plan.tunneling))
    assert set(plan.to_dict()) >= {"mode_index", "tunneling", "transfer_time", "phase", "setup"}


def test_three_mode_swap(plan):
    U = three_mode_propagator(plan, plan.transfer_time)
    assert U[2, 0] == pytest.approx(-np.exp(-1j * plan.phase), abs=1e-10)
    assert U[1, 1] == pytest.approx(-1.0, abs=1e-10)
    assert abs(U[0, 0]) < 1e-10


@pytest.mark.parametrize("ratio", [0.02, 0.05])
def test_resonant_transfer(dot_droplet, ratio):
    _, spectrum, setup = dot_droplet
    plan = dot_plan(spectrum, setup, ratio=ratio, verbose=False)
    trace, block = run_dot_transfer(spectrum, plan, samples=51, verbose=False)
    assert trace.fidelity >= 0.99
    assert trace.norm_drift < 1e-8
    assert block.shape == (2, 2)
    assert gate_extract(trace, plan).fidelity >= 0.99


@pytest.mark.parametrize("fraction", [-1.0, 1.0])
def test_three_mode_detuning_blocks_swap(plan, fraction):
    U = three_mode_propagator(detuned(plan, fraction * plan.spacing), plan.transfer_time)
    assert abs(U[2, 0]) ** 2 < 0.5


@pytest.mark.parametrize("fraction,bound", [(-0.5, 0.1), (0.5, 0.1), (-1.0, 0.5), (1.0, 0.5)])
def test_detuning_blocks_transfer(dot_droplet, plan, fraction, bound):
    _, spectrum, _ = dot_droplet
    target = plan.mode_energy + fraction * plan.spacing
    if target <= max(plan.g_l, plan.g_r):
        pytest.skip("失谐后 Δ_S 不再大于耦合")
    others = np.delete(spectrum.eps, plan.mode_index)
    if np.min(np.abs(others - target)) < 4.0 * plan.tunneling:
        pytest.skip("失谐后寄存器与相邻模式共振")
    trace, _ = run_dot_transfer(spectrum, detuned(plan, fraction * plan.spacing), samples=11, verbose=False)
    assert trace.fidelity < bound


@pytest.mark.slow
def test_counter_rotating_terms_shrink_with_coupling(dot_droplet, plan):
    _, spectrum, setup = dot_droplet
    ratios = np.array([0.025, 0.05, 0.1])
    diffs = []
    for ratio in ratios:
        scaled = dot_plan(spectrum, setup.with_couplings(ratio * plan.mode_energy, 0.0), mode=plan.mode_index,
                          verbose=False)
        fidelities = [
            run_dot_transfer(spectrum, scaled, form=form, samples=2, verbose=False)[0].fidelity
            for form in ("secular", "full")
        ]
        diffs.append(abs(fidelities[0] - fidelities[1]))
    slope = np.polyfit(np.log(ratios), np.log(diffs), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.3)
    assert diffs[1] < 0.01


def test_plan_errors(dot_droplet):
    _, spectrum, setup = dot_droplet
    with pytest.raises(PreconditionError):
        dot_plan(spectrum, setup, mode=spectrum.n_modes, ratio=0.05, verbose=False)
    with pytest.raises(PreconditionError):
        dot_plan(spectrum, setup.with_couplings(0.0, 0.0), verbose=False)
