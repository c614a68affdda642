# coding=utf-8

import numpy as np
import pytest

from tpst.transfer import TRACE_HEADER, Pulse, RegisterSetup, TransferTrace
from tpst.utils.errors import PreconditionError


def test_pulse_interpolates():
    pulse = Pulse(times=[0.0, 1.0, 2.0], samples=[0.0, 0.2, 0.4], g_max=0.5)
    assert pulse(0.5) == pytest.approx(0.1)
    assert pulse.peak == pytest.approx(0.4)
    assert pulse.to_dict()["n_samples"] == 3
    assert pulse.is_real and pulse.to_dict()["phase_span"] == 0.0


def test_pulse_phase_rotates_coupling():
    pulse = Pulse(times=[0.0, 2.0], samples=[0.2, 0.2], phase=[0.0, np.pi])
    assert not pulse.is_real
    assert pulse(1.0) == pytest.approx(0.2j)
    assert pulse.peak == pytest.approx(0.2)
    assert pulse.to_dict()["phase_span"] == pytest.approx(np.pi)


def test_pulse_rejects_bad_samples():
    with pytest.raises(PreconditionError):
        Pulse(times=[0.0, 1.0], samples=[0.0])
    with pytest.raises(PreconditionError):
        Pulse(times=[0.0, 1.0], samples=[0.0, 0.6], g_max=0.5)
    with pytest.raises(PreconditionError):
        Pulse(times=[0.0, 1.0], samples=[0.0, 0.1], phase=[0.0])


def test_register_setup_limits(dot_droplet):
    lattice, _, setup = dot_droplet
    with pytest.raises(PreconditionError):
        setup.with_couplings(1.0, 0.0).validate(lattice)
    with pytest.raises(PreconditionError):
        RegisterSetup(delta_s=0.0, site_a=setup.site_a, site_b=setup.site_b).validate()
    with pytest.raises(PreconditionError):
        RegisterSetup(delta_s=1.0, site_a=setup.site_a, site_b=setup.site_a).validate()
    with pytest.raises(PreconditionError):
        RegisterSetup(delta_s=1.0, site_a=0, site_b=1, flavor_beta="w").validate()


def test_register_setup_requires_dangling_sites(dot_droplet):
    lattice, _, setup = dot_droplet
    bulk = lattice.site_index(5, 5, "A_z")
    with pytest.raises(PreconditionError) as exc:
        RegisterSetup(delta_s=1.0, site_a=bulk, site_b=setup.site_b).validate(lattice)
    assert exc.value.code == "NOT_DANGLING"
    with pytest.raises(PreconditionError):
        RegisterSetup(delta_s=1.0, site_a=setup.site_a, site_b=setup.site_b, flavor_beta="y").validate(lattice)
    with pytest.raises(PreconditionError):
        RegisterSetup.for_lattice(lattice, 1.0, bulk, setup.site_b)


def test_for_lattice_picks_dangling_flavor(dot_droplet):
    _, _, setup = dot_droplet
    assert setup.flavor_beta == "x" and setup.flavor_eta == "x"
    data = setup.with_couplings(0.1, 0.2).to_dict()
    assert data["g_l"] == 0.1 and data["g_r"] == 0.2


def test_trace_summary():
    trace = TransferTrace(
        times=np.array([0.0, 1.0]),
        amp_l=np.array([1.0, 0.6]),
        amp_r=np.array([0.0, 0.8j]),
        edge_prob=np.array([0.0, 0.0]),
        norm=np.array([1.0, 1.0 + 1e-12]),
    )
    assert trace.fidelity == pytest.approx(0.64)
    assert trace.duration == 1.0
    assert trace.norm_drift == pytest.approx(1e-12)
    rows = trace.rows()
    assert len(rows[0]) == len(TRACE_HEADER)
    assert rows[1][4] == pytest.approx(0.8)
    assert set(trace.summary()) == {"fidelity", "duration", "norm_drift", "method", "form", "phases"}
