# coding=utf-8
"""
传输模块数据模型

寄存器设置、点区方案、脉冲、波包方案与演化轨迹。
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from tpst.model.lattice import FLAVORS, Lattice
from tpst.utils.errors import PreconditionError

TRACE_HEADER = ["t", "re_amp_L", "im_amp_L", "re_amp_R", "im_amp_R", "edge_prob", "norm"]


@dataclass
class Pulse:
    """均匀时间网格上的耦合 g(t) = |g|·e^{iθ}；phase 为 None 时 g 为实数"""

    times: np.ndarray
    samples: np.ndarray
    g_max: float = float("inf")
    eps_res: float = 1e-4
    capped_fraction: float = 0.0        # 处于上限的采样比例
    phase: Optional[np.ndarray] = None  # θ(t)，补偿随 |g|² 变化的寄存器能移

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.samples = np.asarray(self.samples, dtype=float)
        if self.times.shape != self.samples.shape:
            raise PreconditionError("脉冲时间网格与采样长度不一致")
        if self.phase is not None:
            self.phase = np.asarray(self.phase, dtype=float)
            if self.phase.shape != self.times.shape:
                raise PreconditionError("脉冲相位与时间网格长度不一致")
        if np.any(np.abs(self.samples) > self.g_max * (1 + 1e-12)):
            raise PreconditionError(f"脉冲超过上限 g_max = {self.g_max}")

    def __call__(self, t: float) -> Union[float, complex]:
        g = float(np.interp(t, self.times, self.samples))
        if self.phase is None:
            return g
        return g * complex(np.exp(1j * np.interp(t, self.times, self.phase)))

    @property
    def is_real(self) -> bool:
        return self.phase is None

    @property
    def peak(self) -> float:
        return float(np.max(np.abs(self.samples), initial=0.0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "g_max": self.g_max,
            "eps_res": self.eps_res,
            "peak": self.peak,
            "capped_fraction": self.capped_fraction,
            "n_samples": int(len(self.samples)),
            "phase_span": 0.0 if self.phase is None else float(np.ptp(self.phase)),
        }


Coupling = Union[float, Pulse]


def coupling_value(g: Coupling, t: float) -> Union[float, complex]:
    return g(t) if isinstance(g, Pulse) else float(g)


def coupling_peak(g: Coupling) -> float:
    return g.peak if isinstance(g, Pulse) else abs(float(g))


@dataclass
class RegisterSetup:
    """两个自旋寄存器与注入位点"""

    delta_s: float                      # 寄存器劈裂 Δ_S（单位 κ）
    site_a: int                         # L 寄存器注入位点
    site_b: int                         # R 寄存器注入位点
    flavor_beta: str = "x"              # a 处耦合味
    flavor_eta: str = "x"               # b 处耦合味
    g_l: Coupling = 0.0
    g_r: Coupling = 0.0

    def validate(self, lattice: Optional[Lattice] = None) -> "RegisterSetup":
        """
        检查寄存器设置

        Raises:
            PreconditionError: Δ_S <= 0、静态耦合 >= Δ_S、注入位点不是悬挂位点或味不匹配
        """
        if self.delta_s <= 0:
            raise PreconditionError(f"Δ_S 必须为正，收到 {self.delta_s}")
        for name, g in (("g_L", self.g_l), ("g_R", self.g_r)):
            if not isinstance(g, Pulse) and abs(float(g)) >= self.delta_s:
                raise PreconditionError(
                    f"静态耦合 |{name}| = {abs(float(g)):.4g} 必须小于 Δ_S = {self.delta_s:.4g}",
                    suggestion="减小耦合以保持费米子数守恒区"
                )
        for flavor in (self.flavor_beta, self.flavor_eta):
            if flavor not in FLAVORS:
                raise PreconditionError(f"未知耦合味 '{flavor}'")
        if self.site_a == self.site_b:
            raise PreconditionError("两个注入位点不能相同")
        if lattice is not None:
            for site, flavor in ((self.site_a, self.flavor_beta), (self.site_b, self.flavor_eta)):
                if site not in lattice.dangling:
                    raise PreconditionError(
                        f"注入位点 {site} 没有悬挂 Majorana",
                        code="NOT_DANGLING",
                        suggestion="请选择配位数为 2 的边界位点"
                    )
                if lattice.dangling[site] != flavor:
                    raise PreconditionError(
                        f"位点 {site} 的悬挂味为 {lattice.dangling[site]}，与耦合味 {flavor} 不符"
                    )
        return self

    def with_couplings(self, g_l: Coupling, g_r: Coupling) -> "RegisterSetup":
        return replace(self, g_l=g_l, g_r=g_r)

    def to_dict(self) -> Dict[str, Any]:
        def echo(g):
            return g.to_dict() if isinstance(g, Pulse) else float(g)

        return {
            "delta_s": self.delta_s,
            "site_a": self.site_a,
            "site_b": self.site_b,
            "flavor_beta": self.flavor_beta,
            "flavor_eta": self.flavor_eta,
            "g_l": echo(self.g_l),
            "g_r": echo(self.g_r),
        }

    @classmethod
    def for_lattice(cls, lattice: Lattice, delta_s: float, site_a: int, site_b: int, **kwargs) -> "RegisterSetup":
        """耦合味取注入位点记录的悬挂味"""
        for site in (site_a, site_b):
            if site not in lattice.dangling:
                raise PreconditionError(f"注入位点 {site} 没有悬挂 Majorana", code="NOT_DANGLING")
        return cls(
            delta_s=delta_s,
            site_a=site_a,
            site_b=site_b,
            flavor_beta=lattice.dangling[site_a],
            flavor_eta=lattice.dangling[site_b],
            **kwargs,
        )


@dataclass
class DotPlan:
    """点区共振隧穿方案"""

    mode_index: int                     # k̃
    mode_energy: float                  # ε_k̃
    g_l: float
    g_r: float
    tunneling: float                    # t_k̃ = |g_L Q_{k̃,a}|/√2
    transfer_time: float                # τ = π/(√2 t_k̃)
    phase: float                        # φ = φ_a − φ_b
    phase_a: float
    phase_b: float
    q_a: complex
    q_b: complex
    spacing: float                      # 相邻模式最小间隔
    resolvability: float                # |g Q|/间隔
    setup: RegisterSetup = field(repr=False, default=None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode_index": self.mode_index,
            "mode_energy": self.mode_energy,
            "g_l": self.g_l,
            "g_r": self.g_r,
            "tunneling": self.tunneling,
            "transfer_time": self.transfer_time,
            "phase": self.phase,
            "phase_a": self.phase_a,
            "phase_b": self.phase_b,
            "abs_q_a": abs(self.q_a),
            "abs_q_b": abs(self.q_b),
            "spacing": self.spacing,
            "resolvability": self.resolvability,
            "setup": self.setup.to_dict() if self.setup is not None else None,
        }


@dataclass
class WavepacketPlan:
    """液滴区波包发射/接收方案"""

    times: np.ndarray                   # 均匀时间网格
    profile: np.ndarray                 # 目标时间包络 f(t)，∫|f|² = 1
    velocity: float                     # 边缘群速度 v
    edge_length: float                  # 有效边缘长度 l（由注入点模式归一化给出）
    coupling_velocity: float            # a 处有效耦合速度 v_c = 1/(π ν_a)
    coupling_velocity_b: float          # b 处
    arc_length: float                   # a 沿手征方向到 b 的弧长
    delay: float                        # 传播延迟 d/v
    g_max: float
    eps_res: float
    lamb_a: float = 0.0                 # a 处能移系数 λ：寄存器能量随 |g|² 移动 λ|g|²
    lamb_b: float = 0.0
    setup: RegisterSetup = field(repr=False, default=None)
    emission: Optional[Pulse] = None
    retrieval: Optional[Pulse] = None
    h: Optional[np.ndarray] = None      # 发射累积量 h(t) = ∫ g²/(2v_c)

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "velocity": self.velocity,
            "edge_length": self.edge_length,
            "coupling_velocity": self.coupling_velocity,
            "coupling_velocity_b": self.coupling_velocity_b,
            "arc_length": self.arc_length,
            "delay": self.delay,
            "g_max": self.g_max,
            "eps_res": self.eps_res,
            "lamb_a": self.lamb_a,
            "lamb_b": self.lamb_b,
            "duration": float(self.times[-1]),
            "dt": self.dt,
            "emission": self.emission.to_dict() if self.emission else None,
            "retrieval": self.retrieval.to_dict() if self.retrieval else None,
        }


@dataclass(frozen=True)
class EdgeRoute:
    """圆柱底边上的注入路线：a 沿手征方向 arc 个元胞到 b"""

    site_a: int
    site_b: int
    arc_length: float                   # 单位 a（元胞）
    direction: int                      # 手征方向：+1 沿 i 增大
    upstream: Tuple[int, ...] = ()      # 反手征方向、与 b 对称处起的底边位点

    def reversed(self, ly: int) -> "EdgeRoute":
        """交换 a、b；新路线沿手征方向需绕行 L_y − arc"""
        return replace(self, site_a=self.site_b, site_b=self.site_a, arc_length=float(ly - self.arc_length))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "site_a": self.site_a,
            "site_b": self.site_b,
            "arc_length": self.arc_length,
            "direction": self.direction,
            "n_upstream": len(self.upstream),
        }


@dataclass
class TransferTrace:
    """演化轨迹"""

    times: np.ndarray
    amp_l: np.ndarray
    amp_r: np.ndarray
    edge_prob: np.ndarray
    norm: np.ndarray
    method: str = "split4"
    form: str = "secular"
    block: Optional[np.ndarray] = None          # 末态 2x2 单粒子块 u[输出, 输入]（L, R）
    region_prob: Optional[np.ndarray] = None    # 指定区域上的概率
    delta_s: float = 0.0
    phases: Dict[str, float] = field(default_factory=dict)

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norm - self.norm[0]), initial=0.0))

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    @property
    def fidelity(self) -> float:
        """F = |R 上的末态振幅|²"""
        return float(np.abs(self.amp_r[-1]) ** 2)

    def rows(self) -> List[List[float]]:
        return [
            [float(t), float(l.real), float(l.imag), float(r.real), float(r.imag), float(e), float(n)]
            for t, l, r, e, n in zip(self.times, self.amp_l, self.amp_r, self.edge_prob, self.norm)
        ]

    def summary(self) -> Dict[str, Any]:
        return {
            "fidelity": self.fidelity,
            "duration": self.duration,
            "norm_drift": self.norm_drift,
            "method": self.method,
            "form": self.form,
            "phases": dict(self.phases),
        }
