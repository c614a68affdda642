# coding=utf-8

import numpy as np
import pytest

from tpst.fermion import (
    assemble,
    band_structure,
    band_summary,
    bloch_spectrum,
    bulk_gap,
    diagonalize,
    edge_branch,
    edge_fit,
)
from tpst.model import Geometry, build_lattice, ground_gauge, reverse_triangle_fluxes
from tpst.utils.errors import PreconditionError


@pytest.fixture(scope="module")
def cylinder():
    return build_lattice(Geometry("cylinder", 61, 40))


@pytest.fixture(scope="module")
def bands(cylinder):
    return band_structure(cylinder, ground_gauge(cylinder), jobs=1, verbose=False)


def test_shape(bands):
    assert bands.energies.shape == (61, 6 * 40)
    assert bands.row_weights.shape == (61, 6 * 40, 40)
    np.testing.assert_allclose(bands.row_weights.sum(axis=2), 1.0, atol=1e-10)
    # 粒子空穴对称：E(k) = -E(-k)
    mirrored = -bands.energies[(-np.arange(61)) % 61][:, ::-1]
    np.testing.assert_allclose(bands.energies, mirrored, atol=1e-8)


def test_bulk_gap(bands):
    assert bulk_gap(bands) == pytest.approx(0.46, abs=0.01)


def test_edge_crossing_near_zone_boundary(bands):
    fit = edge_fit(bands)
    assert abs(fit.crossing_k - np.pi) <= 0.1
    assert fit.single_sign
    assert fit.velocity != 0
    assert 0 < fit.localization_length < 40


def test_edge_branch_exists_on_both_sides(bands):
    for side in ("bottom", "top"):
        energies, index = edge_branch(bands, side)
        assert np.isfinite(energies).any()
        assert (index >= 0).any()


def test_opposite_boundaries_counter_propagate(bands):
    assert np.sign(edge_fit(bands, side="bottom").velocity) == -np.sign(edge_fit(bands, side="top").velocity)


def test_reversed_triangles_flip_chirality(cylinder, bands):
    reversed_bands = band_structure(cylinder, reverse_triangle_fluxes(ground_gauge(cylinder)),
                                    jobs=1, verbose=False)
    assert np.sign(edge_fit(reversed_bands).velocity) == -np.sign(edge_fit(bands).velocity)
    assert bulk_gap(reversed_bands) == pytest.approx(bulk_gap(bands), abs=1e-8)


def test_summary_keys(bands):
    summary = band_summary(bands)
    assert set(summary) == {"bulk_gap", "edge_crossing_k", "edge_velocity", "localization_length", "ly", "lx"}
    assert summary["ly"] == 61 and summary["lx"] == 40


def test_rows_layout():
    lattice = build_lattice(Geometry("cylinder", 4, 3))
    small = band_structure(lattice, ground_gauge(lattice), jobs=1, verbose=False)
    rows = small.rows()
    assert len(rows) == 4 * 18
    assert rows[0][:2] == [0.0, 0]


def test_requires_cylinder():
    torus = build_lattice(Geometry("torus", 3, 3))
    with pytest.raises(PreconditionError):
        band_structure(torus, ground_gauge(torus), verbose=False)


def test_bloch_spectrum_matches_real_space():
    lattice = build_lattice(Geometry("cylinder", 7, 3))
    gauge = ground_gauge(lattice)
    spectrum = bloch_spectrum(lattice, gauge, jobs=1, verbose=False)
    h = assemble(lattice, gauge)
    np.testing.assert_allclose(spectrum.eps, diagonalize(h).eps, atol=1e-9)
    q_full = spectrum.q_full
    np.testing.assert_allclose(q_full @ q_full.conj().T, np.eye(lattice.n_sites), atol=1e-10)
    eps = np.concatenate([spectrum.eps, -spectrum.eps])
    np.testing.assert_allclose(-1j * (q_full.conj().T * eps) @ q_full, h.A, atol=1e-9)
    assert spectrum.pairing_defect < 1e-10


def test_bloch_spectrum_requires_cylinder():
    torus = build_lattice(Geometry("torus", 3, 3))
    with pytest.raises(PreconditionError):
        bloch_spectrum(torus, ground_gauge(torus), verbose=False)
