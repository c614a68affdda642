# coding=utf-8
"""
拓扑不变量

在环面 Bloch 哈密顿量 h(k1, k2) 上用离散 Berry 曲率（链变量乘积）
计算占据带（负能三带）的 Chern 数。
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy.linalg import eigh

from tpst.fermion.bands import BandStructure, bloch_matrix, bloch_terms, edge_fit
from tpst.model.gauge import GaugeConfig
from tpst.model.lattice import Lattice
from tpst.utils.errors import NumericalError, PreconditionError

QUANTIZATION_TOLERANCE = 1e-6
GAP_TOLERANCE = 1e-6
MAX_REFINEMENTS = 3


@dataclass
class TopologyResult:
    """拓扑结果"""

    chern: int
    quantization_defect: float
    grid: int
    edge_velocity: Optional[float] = None
    localization_length: Optional[float] = None
    crossing_k: Optional[float] = None
    history: Dict[int, float] = field(default_factory=dict)   # 网格 -> 未取整 ν

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chern": self.chern,
            "quantization_defect": self.quantization_defect,
            "grid": self.grid,
            "edge_velocity": self.edge_velocity,
            "localization_length": self.localization_length,
            "crossing_k": self.crossing_k,
            "history": {str(k): v for k, v in sorted(self.history.items())},
        }


def _require_torus(lattice: Lattice) -> None:
    if lattice.geometry.kind != "torus":
        raise PreconditionError(f"Bloch 计算需要环面几何，收到 {lattice.geometry.kind}")


def _occupied_frames(lattice: Lattice, gauge: GaugeConfig, kappa: float, n: int) -> np.ndarray:
    n_orb, terms = bloch_terms(lattice, gauge, kappa, axes=(0, 1))
    n_occ = n_orb // 2
    frames = np.empty((n, n, n_orb, n_occ), dtype=complex)
    ks = 2.0 * np.pi * np.arange(n) / n
    for a, k1 in enumerate(ks):
        for b, k2 in enumerate(ks):
            w, v = eigh(bloch_matrix(n_orb, terms, (k1, k2)))
            if np.min(np.abs(w)) < GAP_TOLERANCE * kappa:
                raise NumericalError(
                    f"能隙在 k = ({k1:.6f}, {k2:.6f}) 处闭合（|ε|min = {np.min(np.abs(w)):.3e}）",
                    code="GAP_CLOSING",
                    suggestion="检查规范扇区或换用不同网格"
                )
            frames[a, b] = v[:, :n_occ]
    return frames


def _link_variable(frames: np.ndarray, axis: int) -> np.ndarray:
    shifted = np.roll(frames, -1, axis=axis)
    overlap = np.einsum("abik,abil->abkl", frames.conj(), shifted)
    det = np.linalg.det(overlap)
    return det / np.abs(det)


def berry_sum(lattice: Lattice, gauge: GaugeConfig, kappa: float, n: int) -> float:
    """n x n 网格上的未取整 Chern 数"""
    frames = _occupied_frames(lattice, gauge, kappa, n)
    u1 = _link_variable(frames, 0)
    u2 = _link_variable(frames, 1)
    plaquette = u1 * np.roll(u2, -1, axis=0) / (np.roll(u1, -1, axis=1) * u2)
    return float(np.sum(np.angle(plaquette)) / (2.0 * np.pi))


def chern_number(
    lattice: Lattice,
    gauge: GaugeConfig,
    kappa: float = 1.0,
    grid: int = 24,
    bands: Optional[BandStructure] = None,
) -> TopologyResult:
    """
    占据带 Chern 数

    从 grid 开始，网格加倍直到取整结果稳定。若给出圆柱能带，同时拟合
    边缘群速度与局域长度。

    Raises:
        NumericalError: 网格上能隙闭合，或多次加密后仍不稳定
    """
    _require_torus(lattice)
    history: Dict[int, float] = {}
    n = grid
    raw = berry_sum(lattice, gauge, kappa, n)
    history[n] = raw
    for _ in range(MAX_REFINEMENTS):
        refined = berry_sum(lattice, gauge, kappa, 2 * n)
        history[2 * n] = refined
        n *= 2
        if round(refined) == round(raw):
            break
        raw = refined
    else:
        raise NumericalError(f"Chern 数在网格加密后不稳定: {history}", code="CHERN_UNSTABLE")

    first = history[grid]
    result = TopologyResult(
        chern=int(round(first)),
        quantization_defect=abs(first - round(first)),
        grid=grid,
        history=history,
    )
    if result.quantization_defect > QUANTIZATION_TOLERANCE:
        print(f"[警告] Chern 数量子化偏差 {result.quantization_defect:.3e}")
    if bands is not None:
        fit = edge_fit(bands)
        result.edge_velocity = fit.velocity
        result.localization_length = fit.localization_length
        result.crossing_k = fit.crossing_k
    print(f"[拓扑] ν = {result.chern}（网格 {grid}x{grid}, 偏差 {result.quantization_defect:.1e}）")
    return result


def bloch_bulk_gap(lattice: Lattice, gauge: GaugeConfig, kappa: float = 1.0, grid: int = 6) -> float:
    """环面 Bloch 网格上的最小正能量（网格为 3 的倍数时包含 K 点）"""
    _require_torus(lattice)
    n_orb, terms = bloch_terms(lattice, gauge, kappa, axes=(0, 1))
    ks = 2.0 * np.pi * np.arange(grid) / grid
    best = np.inf
    for k1 in ks:
        for k2 in ks:
            w = eigh(bloch_matrix(n_orb, terms, (k1, k2)), eigvals_only=True)
            best = min(best, float(np.min(w[w > 0])))
    return best
