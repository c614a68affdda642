# coding=utf-8
"""
二次型 Majorana 哈密顿量

H = (i/4)·Σ_ij A_ij γ_i γ_j，A 为实反对称矩阵。
对角化 iA 得到准粒子能量 ε_k >= 0 与模式变换 Q：
c_k = (1/√2)·Σ_j Q_kj γ_j，H = Σ_k ε_k (c_k† c_k − 1/2)。
"""

import hashlib
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.linalg import LinAlgError, eigh, orth, svdvals

from tpst.model.gauge import GaugeConfig
from tpst.model.lattice import Lattice
from tpst.utils.errors import NumericalError, PreconditionError

PAIRING_TOLERANCE = 1e-10
RESIDUAL_TOLERANCE = 1e-8
UNITARITY_TOLERANCE = 1e-10


@dataclass
class QuadraticHamiltonian:
    """二次型哈密顿量系数矩阵"""

    A: np.ndarray                       # 实反对称 N x N
    kappa: float = 1.0                  # 能量单位 κ
    labels: List[str] = field(default_factory=list)   # 行标签（位点或寄存器 Majorana）

    def __post_init__(self):
        self.A = np.asarray(self.A, dtype=float)
        if self.A.ndim != 2 or self.A.shape[0] != self.A.shape[1]:
            raise PreconditionError(f"系数矩阵必须为方阵，收到形状 {self.A.shape}")
        if np.max(np.abs(self.A + self.A.T), initial=0.0) > 0.0:
            raise PreconditionError("系数矩阵必须严格反对称")

    @property
    def size(self) -> int:
        return self.A.shape[0]

    def fingerprint(self) -> str:
        return hashlib.md5(np.ascontiguousarray(self.A).tobytes()).hexdigest()[:12]


@dataclass
class Spectrum:
    """
    准粒子谱

    q 的第 k 行对应 +ε_k 模式；-ε_k 模式的行为其复共轭（粒子空穴对称）。
    """

    eps: np.ndarray                     # 升序非负 ε_k
    q: np.ndarray                       # n_modes x N 复矩阵
    kappa: float = 1.0
    pairing_defect: float = 0.0
    residual: float = 0.0

    @property
    def n_modes(self) -> int:
        return len(self.eps)

    @property
    def size(self) -> int:
        return self.q.shape[1]

    @property
    def vacuum_energy(self) -> float:
        return -0.5 * float(np.sum(self.eps))

    @property
    def q_full(self) -> np.ndarray:
        """全部带符号模式的行：[+ε 行; -ε 行]"""
        return np.vstack([self.q, self.q.conj()])

    def amplitude(self, site: int) -> np.ndarray:
        """Q_{k,site}（各 +ε 模式在该 Majorana 上的分量）"""
        return self.q[:, site]

    def mode_spacing(self, k: int) -> float:
        """与相邻模式的最小能量间隔"""
        gaps = []
        if k > 0:
            gaps.append(self.eps[k] - self.eps[k - 1])
        if k + 1 < self.n_modes:
            gaps.append(self.eps[k + 1] - self.eps[k])
        return float(min(gaps)) if gaps else float("inf")


def assemble(
    lattice: Lattice,
    gauge: GaugeConfig,
    kappa: float = 1.0,
    jitter: Optional[np.ndarray] = None,
) -> QuadraticHamiltonian:
    """
    组装晶格哈密顿量 A_ij = κ·U_ij

    Args:
        lattice: 晶格
        gauge: 同一晶格上的规范配置
        kappa: 耦合 κ > 0
        jitter: 可选的逐链路耦合扰动 δκ_l（绝对值）

    Raises:
        PreconditionError: 规范配置不属于该晶格
    """
    if gauge.lattice is not lattice and (
        gauge.lattice.geometry != lattice.geometry or gauge.lattice.n_links != lattice.n_links
    ):
        raise PreconditionError("规范配置与晶格不匹配", suggestion="请用 ground_gauge(lattice) 构造规范配置")
    if kappa <= 0:
        raise PreconditionError(f"κ 必须为正，收到 {kappa}")
    n = lattice.n_sites
    A = np.zeros((n, n))
    couplings = np.full(lattice.n_links, float(kappa))
    if jitter is not None:
        jitter = np.asarray(jitter, dtype=float)
        if jitter.shape != (lattice.n_links,):
            raise PreconditionError(f"扰动数组长度 {jitter.shape} 与链路数 {lattice.n_links} 不一致")
        couplings = couplings + jitter
    signs = gauge.as_array()
    for link in lattice.links:
        value = couplings[link.index] * signs[link.index]
        A[link.i, link.j] += value
        A[link.j, link.i] -= value
    labels = [f"{s.name}({s.cell[0]},{s.cell[1]})" for s in lattice.sites]
    return QuadraticHamiltonian(A=A, kappa=float(kappa), labels=labels)


def _real_kernel_modes(vectors: np.ndarray) -> np.ndarray:
    """零能子空间：取 ker A 的实正交基，两两组合为复模式"""
    basis = orth(np.hstack([vectors.real, vectors.imag]))
    if basis.shape[1] != vectors.shape[1] or basis.shape[1] % 2:
        raise NumericalError(
            f"零模子空间维数异常（{vectors.shape[1]} -> {basis.shape[1]}）",
            suggestion="奇数个 Majorana 零模无法组成费米子模式"
        )
    return (basis[:, 0::2] + 1j * basis[:, 1::2]) / np.sqrt(2.0)


def diagonalize(h: QuadraticHamiltonian, check: bool = True) -> Spectrum:
    """
    对角化二次型哈密顿量

    把 iA 当作厄米矩阵求本征，正能本征向量的复共轭即 Q 的行。

    Args:
        h: 二次型哈密顿量
        check: 是否执行配对/幺正/残差检查

    Raises:
        NumericalError: 本征求解失败（附矩阵指纹）或检查不通过
    """
    A = h.A
    n = h.size
    if n % 2:
        raise PreconditionError(f"Majorana 数必须为偶数，收到 {n}")
    try:
        w, V = eigh(1j * A)
    except (LinAlgError, ValueError) as exc:
        raise NumericalError(
            f"本征求解未收敛 (N={n}, 指纹 {h.fingerprint()}): {exc}",
            code="EIGENSOLVER_FAILED",
        )
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    zero_tol = 1e-9 * scale
    pairing_defect = float(np.max(np.abs(w + w[::-1]), initial=0.0))
    positive = w > zero_tol
    zero = np.abs(w) <= zero_tol

    eps = w[positive]
    modes = V[:, positive]
    if np.any(zero):
        zero_modes = _real_kernel_modes(V[:, zero])
        eps = np.concatenate([np.zeros(zero_modes.shape[1]), eps])
        modes = np.hstack([zero_modes, modes])
    q = modes.conj().T

    spectrum = Spectrum(eps=eps, q=q, kappa=h.kappa, pairing_defect=pairing_defect)
    if check:
        _check_spectrum(h, spectrum)
    return spectrum


def _check_spectrum(h: QuadraticHamiltonian, spectrum: Spectrum) -> None:
    kappa = max(h.kappa, 1e-300)
    if spectrum.pairing_defect > PAIRING_TOLERANCE * max(kappa, 1.0):
        raise NumericalError(
            f"粒子空穴配对缺陷 {spectrum.pairing_defect:.3e} 超限 (指纹 {h.fingerprint()})",
            code="PAIRING_DEFECT",
        )
    if len(spectrum.eps) * 2 != h.size:
        raise NumericalError(f"模式数 {len(spectrum.eps)} 与维数 {h.size} 不匹配 (指纹 {h.fingerprint()})")
    q_full = spectrum.q_full
    unitarity = float(np.max(np.abs(q_full @ q_full.conj().T - np.eye(h.size))))
    if unitarity > UNITARITY_TOLERANCE:
        raise NumericalError(f"Q 非幺正，偏差 {unitarity:.3e} (指纹 {h.fingerprint()})", code="Q_NOT_UNITARY")
    target = np.diag(np.concatenate([spectrum.eps, -spectrum.eps]))
    residual = float(np.max(np.abs(q_full @ (1j * h.A) @ q_full.conj().T - target)))
    spectrum.residual = residual
    if residual > RESIDUAL_TOLERANCE * max(kappa, 1.0):
        raise NumericalError(f"Q 残差 {residual:.3e} 超限 (指纹 {h.fingerprint()})", code="Q_RESIDUAL")


def vacuum_energy(h: QuadraticHamiltonian) -> float:
    """真空能 −½Σε_k（奇异值快速路径：A 的奇异值为每个 ε_k 各两次）"""
    return -0.25 * float(np.sum(svdvals(h.A)))


def many_body_levels(spectrum: Spectrum, max_modes: int = 16) -> np.ndarray:
    """全部占据组合的多体能级（仅用于小系统）"""
    n = spectrum.n_modes
    if n > max_modes:
        raise PreconditionError(f"模式数 {n} 超过枚举上限 {max_modes}")
    bits = (np.arange(2 ** n)[:, None] >> np.arange(n)[None, :]) & 1
    return np.sort(spectrum.vacuum_energy + bits @ spectrum.eps)
