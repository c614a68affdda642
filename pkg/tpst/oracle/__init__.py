# coding=utf-8
"""
多体验证模块

小团簇精确对角化、规范扇区投影计数与多体传输协议。
"""

from tpst.oracle.cluster import SPIN_CAP, Bond, MajoranaPair, SpinCluster, build_cluster, from_bonds, majorana
from tpst.oracle.protocol import ProtocolResult, run_spin_protocol, target_sector
from tpst.oracle.spectrum import (
    LoopOperator,
    ProjectorSpec,
    SectorPrediction,
    compare_spectra,
    dangling_count,
    exact_spectrum,
    ground_degeneracy,
    loop_operators,
    sector_prediction,
    spin_hamiltonian,
)

__all__ = [
    "SPIN_CAP",
    "Bond",
    "MajoranaPair",
    "SpinCluster",
    "majorana",
    "from_bonds",
    "build_cluster",
    "spin_hamiltonian",
    "exact_spectrum",
    "ProjectorSpec",
    "SectorPrediction",
    "sector_prediction",
    "compare_spectra",
    "LoopOperator",
    "loop_operators",
    "dangling_count",
    "ground_degeneracy",
    "ProtocolResult",
    "target_sector",
    "run_spin_protocol",
]
