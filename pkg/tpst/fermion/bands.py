# coding=utf-8
"""
圆柱能带

沿周期方向做 Bloch 分解，每个 k_y 对角化 6·L_x 维块，
按行权重区分边缘态与体态，并从底边分支拟合群速度与局域长度。
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigh

from tpst.fermion.hamiltonian import PAIRING_TOLERANCE, Spectrum
from tpst.model.gauge import GaugeConfig, is_translation_invariant
from tpst.model.lattice import Lattice, ROW_SPACING
from tpst.utils.errors import NumericalError, PreconditionError
from tpst.utils.parallel import parallel_map

EDGE_ROWS = 3
EDGE_THRESHOLD = 0.9
BULK_THRESHOLD = 0.25

BAND_HEADER = ["ky_a", "band_index", "energy_over_kappa", "edge_weight_bottom", "edge_weight_top"]


@dataclass(frozen=True)
class BlochTerm:
    """一类平移等价链路：orbital_s -> orbital_t，元胞位移 shift，系数 κU"""

    source: int
    target: int
    shift: Tuple[int, int]
    value: float


def bloch_terms(
    lattice: Lattice,
    gauge: GaugeConfig,
    kappa: float,
    axes: Sequence[int],
) -> Tuple[int, List[BlochTerm]]:
    """
    提取平移不变的链路类

    Args:
        axes: 做 Bloch 分解的元胞方向（0 = i，1 = j）

    Returns:
        (轨道数, 链路类列表)

    Raises:
        PreconditionError: 规范场在这些方向上不平移不变
    """
    g = lattice.geometry
    if (0 in axes and not g.periodic_y) or (1 in axes and not g.periodic_x):
        raise PreconditionError(f"{g.kind} 几何在所选方向上不是周期的")
    if not is_translation_invariant(gauge, axes):
        raise PreconditionError(
            "规范配置不满足平移不变性",
            suggestion="含涡旋或无序的扇区请改用 diagonalize() 做实空间对角化"
        )
    n_orbitals = 6 if 1 in axes else 6 * g.lx

    def orbital(site) -> int:
        return site.sublattice if 1 in axes else site.cell[1] * 6 + site.sublattice

    terms = []
    for link in lattice.links:
        src = lattice.sites[link.i]
        if src.cell[0] != 0 or (1 in axes and src.cell[1] != 0):
            continue
        dst = lattice.sites[link.j]
        shift = (link.shift[0], link.shift[1] if 1 in axes else 0)
        terms.append(BlochTerm(orbital(src), orbital(dst), shift, kappa * gauge.signs[link.index]))
    return n_orbitals, terms


def bloch_matrix(n_orbitals: int, terms: Sequence[BlochTerm], k: Tuple[float, float]) -> np.ndarray:
    """h(k) = Σ iA·e^{ik·d}（厄米）"""
    h = np.zeros((n_orbitals, n_orbitals), dtype=complex)
    for term in terms:
        amp = 1j * term.value * np.exp(1j * (k[0] * term.shift[0] + k[1] * term.shift[1]))
        h[term.source, term.target] += amp
        h[term.target, term.source] += np.conj(amp)
    return h


@dataclass
class BandStructure:
    """圆柱能带：momenta (L_y,), energies (L_y, 6L_x)，行权重 (L_y, 6L_x, L_x)"""

    ly: int
    lx: int
    momenta: np.ndarray
    energies: np.ndarray
    row_weights: np.ndarray
    edge_rows: int = EDGE_ROWS
    edge_threshold: float = EDGE_THRESHOLD

    @property
    def weight_bottom(self) -> np.ndarray:
        return self.row_weights[:, :, :self.edge_rows].sum(axis=2)

    @property
    def weight_top(self) -> np.ndarray:
        return self.row_weights[:, :, -self.edge_rows:].sum(axis=2)

    @property
    def weight_middle(self) -> np.ndarray:
        quarter = self.lx // 4
        return self.row_weights[:, :, quarter:self.lx - quarter].sum(axis=2)

    @property
    def is_edge(self) -> np.ndarray:
        return np.maximum(self.weight_bottom, self.weight_top) > self.edge_threshold

    @property
    def is_bulk(self) -> np.ndarray:
        return self.weight_middle >= BULK_THRESHOLD

    def rows(self) -> List[List[float]]:
        """CSV 行：ky_a, band_index, energy, w_bottom, w_top"""
        bottom, top = self.weight_bottom, self.weight_top
        out = []
        for n, k in enumerate(self.momenta):
            for b in range(self.energies.shape[1]):
                out.append([float(k), b, float(self.energies[n, b]), float(bottom[n, b]), float(top[n, b])])
        return out


def band_structure(
    lattice: Lattice,
    gauge: GaugeConfig,
    kappa: float = 1.0,
    edge_rows: int = EDGE_ROWS,
    edge_threshold: float = EDGE_THRESHOLD,
    jobs: Optional[int] = None,
    verbose: bool = True,
) -> BandStructure:
    """
    圆柱能带

    k_y·a = 2πn/L_y，每个动量对角化 6·L_x 维 Bloch 块。

    Raises:
        PreconditionError: 非圆柱几何或规范场不平移不变
    """
    g = lattice.geometry
    if g.kind != "cylinder":
        raise PreconditionError(f"band_structure 需要圆柱几何，收到 {g.kind}")
    n_orb, terms = bloch_terms(lattice, gauge, kappa, axes=(0,))
    momenta = 2.0 * np.pi * np.arange(g.ly) / g.ly

    def solve(k: float):
        w, v = eigh(bloch_matrix(n_orb, terms, (k, 0.0)))
        weights = (np.abs(v) ** 2).reshape(g.lx, 6, n_orb).sum(axis=1).T
        return w, weights

    results = parallel_map(solve, list(momenta), jobs)
    energies = np.array([r[0] for r in results])
    row_weights = np.array([r[1] for r in results])
    bands = BandStructure(g.ly, g.lx, momenta, energies, row_weights, edge_rows, edge_threshold)
    if verbose:
        print(f"[能带] {g.ly}x{g.lx} 圆柱: {len(momenta)} 个动量点, 每点 {n_orb} 个能级, "
              f"边缘态 {int(bands.is_edge.sum())} 个")
    return bands


def bloch_spectrum(
    lattice: Lattice,
    gauge: GaugeConfig,
    kappa: float = 1.0,
    jobs: Optional[int] = None,
    verbose: bool = True,
) -> Spectrum:
    """
    圆柱的实空间准粒子谱（由各 k_y 的 Bloch 块拼装）

    模式 (k, n) 的行 Q = conj(e^{ik·i}·u_n(k)/√L_y)，与 diagonalize() 约定一致，
    只做 L_y 次 6·L_x 维对角化。

    Raises:
        PreconditionError: 非圆柱几何或规范场不平移不变
        NumericalError: 出现零能模式或粒子空穴配对缺陷超限
    """
    g = lattice.geometry
    if g.kind != "cylinder":
        raise PreconditionError(f"bloch_spectrum 需要圆柱几何，收到 {g.kind}")
    n_orb, terms = bloch_terms(lattice, gauge, kappa, axes=(0,))
    momenta = 2.0 * np.pi * np.arange(g.ly) / g.ly

    def solve(k: float):
        h = bloch_matrix(n_orb, terms, (k, 0.0))
        w, v = eigh(h)
        return w, v, float(np.max(np.abs(h @ v - v * w)))

    results = parallel_map(solve, list(momenta), jobs)
    energies = np.array([r[0] for r in results])
    # ε_n(k) = −ε_{−n}(−k)
    mirror = energies[(-np.arange(g.ly)) % g.ly, ::-1]
    pairing_defect = float(np.max(np.abs(energies + mirror)))
    if pairing_defect > PAIRING_TOLERANCE * max(kappa, 1.0):
        raise NumericalError(f"粒子空穴配对缺陷 {pairing_defect:.3e} 超限", code="PAIRING_DEFECT")
    scale = max(1.0, float(np.max(np.abs(energies))))
    if np.min(np.abs(energies)) <= 1e-9 * scale:
        raise NumericalError(
            "圆柱谱含零能模式",
            code="ZERO_MODE",
            suggestion="L_y 取奇数以避开 k_y·a = π 处的边缘零模"
        )

    cells = np.array([s.cell[0] for s in lattice.sites])
    orbitals = np.array([s.cell[1] * 6 + s.sublattice for s in lattice.sites])
    eps = np.concatenate([w[w > 0] for w, _, _ in results])
    if 2 * len(eps) != lattice.n_sites:
        raise NumericalError(f"正能模式数 {len(eps)} 与 Majorana 数 {lattice.n_sites} 不匹配")
    order = np.argsort(eps, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    q = np.empty((len(eps), lattice.n_sites), dtype=complex)
    start = 0
    for k, (w, v, _) in zip(momenta, results):
        keep = w > 0
        count = int(np.count_nonzero(keep))
        waves = np.exp(1j * k * cells)[:, None] * v[orbitals][:, keep] / np.sqrt(g.ly)
        q[rank[start:start + count]] = waves.conj().T
        start += count

    spectrum = Spectrum(
        eps=eps[order],
        q=q,
        kappa=kappa,
        pairing_defect=pairing_defect,
        residual=max(r[2] for r in results),
    )
    if verbose:
        print(f"[能带] {g.ly}x{g.lx} 圆柱实空间谱: {spectrum.n_modes} 个模式, "
              f"ε ∈ [{spectrum.eps[0]:.4f}, {spectrum.eps[-1]:.4f}]")
    return spectrum


def bulk_gap(bands: BandStructure) -> float:
    """体能隙：各动量下最低正能体态的最小值"""
    mask = bands.is_bulk & (bands.energies > 0)
    if not np.any(mask):
        raise NumericalError("没有找到体态", suggestion="增大 L_x 或降低体态判据")
    return float(np.min(bands.energies[mask]))


@dataclass
class EdgeFit:
    """底边分支拟合结果"""

    crossing_k: float                   # 零能穿越动量 k_y·a
    velocity: float                     # 群速度（单位 κ·a）
    localization_length: float          # 振幅衰减长度 ξ（单位 a）
    single_sign: bool                   # 窗口内斜率符号是否一致

    def to_dict(self) -> Dict[str, float]:
        return {
            "crossing_k": self.crossing_k,
            "velocity": self.velocity,
            "localization_length": self.localization_length,
            "single_sign": self.single_sign,
        }


def edge_branch(bands: BandStructure, side: str = "bottom") -> Tuple[np.ndarray, np.ndarray]:
    """每个动量下该边界上 |ε| 最小的边缘态：(能量, 态编号)，无边缘态处为 nan / -1"""
    weight = bands.weight_bottom if side == "bottom" else bands.weight_top
    energies = np.full(bands.ly, np.nan)
    index = np.full(bands.ly, -1, dtype=int)
    for n in range(bands.ly):
        candidates = np.where(weight[n] > bands.edge_threshold)[0]
        if len(candidates) == 0:
            continue
        best = candidates[np.argmin(np.abs(bands.energies[n, candidates]))]
        energies[n] = bands.energies[n, best]
        index[n] = best
    return energies, index


def edge_fit(bands: BandStructure, gap: Optional[float] = None, side: str = "bottom") -> EdgeFit:
    """
    拟合边缘分支

    - 穿越动量：能量变号处线性插值，取最靠近 π 的一处
    - 群速度：|ε| < Δ_b/2 窗口内 ε(k) 的最小二乘斜率
    - ξ：穿越附近边缘态行权重的对数线性拟合，ξ = −2/斜率

    Raises:
        NumericalError: 找不到零能穿越或窗口内点数不足
    """
    if gap is None:
        gap = bulk_gap(bands)
    energies, index = edge_branch(bands, side)
    k = bands.momenta
    crossings = []
    for n in range(bands.ly - 1):
        e0, e1 = energies[n], energies[n + 1]
        if np.isfinite(e0) and np.isfinite(e1) and e0 * e1 <= 0 and e0 != e1:
            crossings.append((k[n] - e0 * (k[n + 1] - k[n]) / (e1 - e0), n))
    if not crossings:
        raise NumericalError(f"{side} 边缘分支没有零能穿越")
    crossing_k, n_cross = min(crossings, key=lambda c: abs(c[0] - np.pi))

    window = np.isfinite(energies) & (np.abs(energies) < gap / 2)
    # 只取与穿越点相连的一段
    segment = np.zeros(bands.ly, dtype=bool)
    for start, step in ((n_cross, -1), (n_cross + 1, 1)):
        n = start
        while 0 <= n < bands.ly and window[n]:
            segment[n] = True
            n += step
    if segment.sum() < 2:
        raise NumericalError("速度拟合窗口内点数不足", suggestion="增大 L_y")
    slope = float(np.polyfit(k[segment], energies[segment], 1)[0])
    diffs = np.diff(energies[segment])
    single_sign = bool(np.all(diffs > 0) or np.all(diffs < 0))

    nearest = n_cross if abs(energies[n_cross]) <= abs(energies[n_cross + 1]) else n_cross + 1
    profile = bands.row_weights[nearest, index[nearest]]
    if side == "top":
        profile = profile[::-1]
    half = max(2, bands.lx // 2)
    rows = np.arange(half)
    values = profile[:half]
    keep = values > 1e-14 * values.max()
    fit = np.polyfit(rows[keep] * ROW_SPACING, np.log(values[keep]), 1)
    xi = float(-2.0 / fit[0]) if fit[0] < 0 else float("inf")
    return EdgeFit(crossing_k=float(crossing_k), velocity=slope, localization_length=xi, single_sign=single_sign)


def band_summary(bands: BandStructure) -> Dict[str, float]:
    gap = bulk_gap(bands)
    fit = edge_fit(bands, gap)
    return {
        "bulk_gap": gap,
        "edge_crossing_k": fit.crossing_k,
        "edge_velocity": fit.velocity,
        "localization_length": fit.localization_length,
        "ly": bands.ly,
        "lx": bands.lx,
    }
