# coding=utf-8
"""
自由 Majorana 费米子模块

哈密顿量组装与对角化、圆柱能带、Chern 数、涡旋能隙与手征边缘通道。
"""

from tpst.fermion.hamiltonian import (
    QuadraticHamiltonian,
    Spectrum,
    assemble,
    diagonalize,
    vacuum_energy,
    many_body_levels,
)
from tpst.fermion.bands import (
    BAND_HEADER,
    BandStructure,
    EdgeFit,
    band_structure,
    band_summary,
    bloch_spectrum,
    bulk_gap,
    edge_branch,
    edge_fit,
)
from tpst.fermion.topology import TopologyResult, chern_number, bloch_bulk_gap
from tpst.fermion.vortex import VortexGapResult, vortex_gap, pair_energy
from tpst.fermion.edge_channel import edge_channel, edge_circulation

__all__ = [
    "QuadraticHamiltonian",
    "Spectrum",
    "assemble",
    "diagonalize",
    "vacuum_energy",
    "many_body_levels",
    "BAND_HEADER",
    "BandStructure",
    "EdgeFit",
    "band_structure",
    "band_summary",
    "bloch_spectrum",
    "bulk_gap",
    "edge_branch",
    "edge_fit",
    "TopologyResult",
    "chern_number",
    "bloch_bulk_gap",
    "VortexGapResult",
    "vortex_gap",
    "pair_energy",
    "edge_channel",
    "edge_circulation",
]
