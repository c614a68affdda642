# coding=utf-8

import numpy as np
import pytest

from tpst.fermion import assemble
from tpst.model import ground_gauge
from tpst.transfer import Pulse, extend_hamiltonian
from tpst.utils.errors import PreconditionError


@pytest.fixture(scope="module")
def coupled(dot_droplet):
    lattice, spectrum, setup = dot_droplet
    return lattice, spectrum, setup.with_couplings(0.05, 0.03)


def test_secular_form(coupled):
    lattice, spectrum, setup = coupled
    ham = extend_hamiltonian(spectrum, setup, "secular", lattice)
    H = ham.matrix()
    assert H.shape == (spectrum.n_modes + 2, spectrum.n_modes + 2)
    assert ham.hermiticity_defect() == 0.0
    assert H[0, 0] == setup.delta_s and H[-1, -1] == setup.delta_s
    np.testing.assert_allclose(np.diag(H)[1:-1].real, spectrum.eps)
    # H_{k,L} = −(i/√2)·g·Q*_{k,a} 的模等于 g|Q|/√2
    np.testing.assert_allclose(np.abs(H[1:-1, 0]), 0.05 * np.abs(spectrum.q[:, setup.site_a]) / np.sqrt(2))


def test_full_form(coupled):
    lattice, spectrum, setup = coupled
    ham = extend_hamiltonian(spectrum, setup, "full", lattice)
    A = ham.matrix()
    N = spectrum.size
    assert A.shape == (N + 4, N + 4)
    assert ham.hermiticity_defect() < 1e-12
    assert A[N, N + 1] == setup.delta_s
    assert A[N, setup.site_a] == pytest.approx(-0.05)
    assert A[N + 2, setup.site_b] == pytest.approx(-0.03)


def test_lattice_block_reproduces_lattice(coupled):
    lattice, spectrum, setup = coupled
    ham = extend_hamiltonian(spectrum, setup, "full")
    np.testing.assert_allclose(ham.lattice_block(), assemble(lattice, ground_gauge(lattice)).A, atol=1e-9)


def test_pulsed_couplings(coupled):
    lattice, spectrum, setup = coupled
    pulse = Pulse(times=[0.0, 10.0], samples=[0.0, 0.2], g_max=0.5)
    ham = extend_hamiltonian(spectrum, setup.with_couplings(pulse, 0.0), "secular")
    assert not ham.is_static
    assert ham.couplings(5.0) == pytest.approx((0.1, 0.0))
    assert ham.norm_bound() >= spectrum.eps[-1] + setup.delta_s + 0.4


def test_phased_pulse_is_secular_only(coupled):
    lattice, spectrum, setup = coupled
    pulse = Pulse(times=[0.0, 10.0], samples=[0.2, 0.2], g_max=0.5, phase=[0.0, np.pi])
    ham = extend_hamiltonian(spectrum, setup.with_couplings(pulse, 0.0), "secular")
    g_l, _ = ham.couplings(5.0)
    assert g_l == pytest.approx(0.2j)
    assert ham.hermiticity_defect(5.0) == 0.0
    with pytest.raises(PreconditionError):
        extend_hamiltonian(spectrum, setup.with_couplings(pulse, 0.0), "full")


def test_unknown_form(coupled):
    _, spectrum, setup = coupled
    with pytest.raises(PreconditionError):
        extend_hamiltonian(spectrum, setup, "rotating")
