# coding=utf-8
"""
寄存器扩展哈密顿量

两种形式：
- secular：模式基 [L, 正能模式..., R]，只保留粒子数守恒项，
  H_{L,k} = −(i/√2)·g_L·U·Q*_{k,a}，对角 {Δ_S, ε_k, Δ_S}
- full：实 Majorana 基 [晶格 γ..., γ0_L, γ3_L, γ0_R, γ3_R]，
  A_{γ0,γ3} = Δ_S，A_{γ0_L,a} = −g_L·U_{L,a}，保留全部非守恒项
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from tpst.fermion.hamiltonian import Spectrum
from tpst.model.lattice import Lattice
from tpst.transfer.models import Pulse, RegisterSetup, coupling_peak, coupling_value
from tpst.utils.errors import PreconditionError

FORMS = ("secular", "full")


@dataclass
class ExtendedHamiltonian:
    """含两个寄存器的单粒子哈密顿量 H(t)"""

    spectrum: Spectrum
    setup: RegisterSetup
    form: str = "secular"
    u_la: int = 1
    u_rb: int = 1

    def __post_init__(self):
        if self.form not in FORMS:
            raise PreconditionError(f"未知形式 '{self.form}'", suggestion=f"可选: {', '.join(FORMS)}")
        n = self.spectrum.size
        for site in (self.setup.site_a, self.setup.site_b):
            if not 0 <= site < n:
                raise PreconditionError(f"注入位点 {site} 超出 Majorana 数 {n}")
        if self.form == "full" and any(
            isinstance(g, Pulse) and not g.is_real for g in (self.setup.g_l, self.setup.g_r)
        ):
            raise PreconditionError("full 形式只接受实耦合", suggestion="带相位的整形脉冲请用 secular 形式")
        # 单位耦合下的模式列 x_k = H_{k,L}/g
        self.x_l = (1j / np.sqrt(2.0)) * self.u_la * self.spectrum.q[:, self.setup.site_a]
        self.x_r = (1j / np.sqrt(2.0)) * self.u_rb * self.spectrum.q[:, self.setup.site_b]
        self._lattice_a: Optional[np.ndarray] = None

    @property
    def n_modes(self) -> int:
        return self.spectrum.n_modes

    @property
    def dim(self) -> int:
        """secular: n+2 复振幅；full: N+4 个 Majorana"""
        return self.n_modes + 2 if self.form == "secular" else self.spectrum.size + 4

    @property
    def is_static(self) -> bool:
        return not isinstance(self.setup.g_l, Pulse) and not isinstance(self.setup.g_r, Pulse)

    @property
    def index_l(self) -> int:
        return 0 if self.form == "secular" else self.spectrum.size

    @property
    def index_r(self) -> int:
        return self.n_modes + 1 if self.form == "secular" else self.spectrum.size + 2

    def couplings(self, t: float) -> Tuple[complex, complex]:
        return coupling_value(self.setup.g_l, t), coupling_value(self.setup.g_r, t)

    def lattice_block(self) -> np.ndarray:
        """由谱重建的晶格反对称矩阵 A = −i·Q†·diag(ε, −ε)·Q"""
        if self._lattice_a is None:
            q_full = self.spectrum.q_full
            eps = np.concatenate([self.spectrum.eps, -self.spectrum.eps])
            self._lattice_a = np.real(-1j * (q_full.conj().T * eps) @ q_full)
        return self._lattice_a

    def matrix(self, t: float = 0.0) -> np.ndarray:
        """secular 形式返回厄米 H(t)，full 形式返回实反对称 A(t)"""
        g_l, g_r = self.couplings(t)
        delta = self.setup.delta_s
        if self.form == "secular":
            n = self.n_modes
            H = np.zeros((n + 2, n + 2), dtype=complex)
            H[0, 0] = delta
            H[n + 1, n + 1] = delta
            H[1:n + 1, 1:n + 1] = np.diag(self.spectrum.eps)
            H[1:n + 1, 0] = g_l * self.x_l
            H[0, 1:n + 1] = np.conj(g_l * self.x_l)
            H[1:n + 1, n + 1] = g_r * self.x_r
            H[n + 1, 1:n + 1] = np.conj(g_r * self.x_r)
            return H

        N = self.spectrum.size
        A = np.zeros((N + 4, N + 4))
        A[:N, :N] = self.lattice_block()
        a, b = self.setup.site_a, self.setup.site_b
        for reg, site, g, u in ((N, a, g_l, self.u_la), (N + 2, b, g_r, self.u_rb)):
            A[reg, reg + 1] = delta
            A[reg + 1, reg] = -delta
            A[reg, site] = -g * u
            A[site, reg] = g * u
        return A

    def norm_bound(self) -> float:
        """‖H‖ 的上界（用于步长规则）"""
        g_max = max(coupling_peak(self.setup.g_l), coupling_peak(self.setup.g_r))
        eps_max = float(np.max(self.spectrum.eps, initial=0.0))
        return eps_max + self.setup.delta_s + 2.0 * g_max

    def hermiticity_defect(self, t: float = 0.0) -> float:
        M = self.matrix(t)
        if self.form == "secular":
            return float(np.max(np.abs(M - M.conj().T)))
        return float(np.max(np.abs(M + M.T)))


def extend_hamiltonian(
    spectrum: Spectrum,
    setup: RegisterSetup,
    form: str = "secular",
    lattice: Optional[Lattice] = None,
    u_la: int = 1,
    u_rb: int = 1,
) -> ExtendedHamiltonian:
    """
    构造含寄存器的扩展哈密顿量

    Args:
        spectrum: 基态扇区的准粒子谱
        setup: 寄存器设置
        form: secular / full
        lattice: 给出时检查注入位点是否为悬挂位点
        u_la, u_rb: 注入链路规范 U_{L,a}、U_{R,b}（模拟扇区中取 +1）

    Raises:
        PreconditionError: 注入位点没有悬挂 Majorana 或设置无效
    """
    setup.validate(lattice)
    return ExtendedHamiltonian(spectrum=spectrum, setup=setup, form=form, u_la=u_la, u_rb=u_rb)
