# coding=utf-8

import numpy as np
import pytest

from tpst.oracle import from_bonds, run_spin_protocol, target_sector
from tpst.utils.errors import LeakageError, PreconditionError


def test_target_sector_is_lowest(register_cluster):
    sector = target_sector(register_cluster)
    assert len(sector.cotree_signs) == 4
    assert sector.allowed_parity in (1, -1)


def test_zero_coupling_is_identity(register_cluster):
    result = run_spin_protocol(register_cluster, couplings=(0.0, 0.0), duration=5.0)
    assert result.plan is None
    assert result.leakage < 1e-10
    assert result.fidelity > 0.999


def test_dot_protocol_reproduces_transfer(register_cluster):
    result = run_spin_protocol(register_cluster, ratio=0.02)
    assert result.fidelity >= 0.99
    assert result.single_particle_fidelity >= 0.99
    assert result.leakage < 0.05
    assert result.gate.shape == (4, 4)
    data = result.to_dict()
    assert data["plan"]["mode_index"] == result.plan.mode_index


def test_strong_leakage_raises(register_cluster):
    with pytest.raises(LeakageError) as exc:
        run_spin_protocol(register_cluster, couplings=(0.9, 0.9), duration=20.0, leakage_threshold=1e-6)
    assert exc.value.code == "REGISTER_LEAKAGE"


def test_requires_registers():
    with pytest.raises(PreconditionError):
        run_spin_protocol(from_bonds(2, [(0, 1, "z")]))
