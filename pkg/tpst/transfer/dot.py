# coding=utf-8
"""
点区共振隧穿

Δ_S 调到单个边缘模式 ε_k̃ 上，两个寄存器经该模式形成有效三模模型，
平衡耦合下经过 τ = π/(√2·t_k̃) 完成 c_L† -> −e^{−iφ}·c_R†。
"""

from dataclasses import replace
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import expm

from tpst.fermion.hamiltonian import Spectrum
from tpst.transfer.evolve import evolve_block
from tpst.transfer.hamiltonian import extend_hamiltonian
from tpst.transfer.models import DotPlan, RegisterSetup, TransferTrace
from tpst.utils.errors import PreconditionError

RESOLVABILITY_BOUND = 0.1
MIN_VISIBILITY = 1e-2


def select_mode(spectrum: Spectrum, site_a: int, site_b: int, window: Optional[float] = None) -> int:
    """能窗 (0, window) 内使 min(|Q_{k,a}|, |Q_{k,b}|) 最大的模式"""
    eps = spectrum.eps
    candidates = np.where((eps > 1e-9) & ((eps < window) if window is not None else True))[0]
    if len(candidates) == 0:
        raise PreconditionError(f"能窗 (0, {window}) 内没有可用模式")
    visibility = np.minimum(np.abs(spectrum.q[candidates, site_a]), np.abs(spectrum.q[candidates, site_b]))
    return int(candidates[np.argmax(visibility)])


def dot_plan(
    spectrum: Spectrum,
    setup: RegisterSetup,
    mode: Optional[int] = None,
    ratio: Optional[float] = None,
    resolvability_bound: float = RESOLVABILITY_BOUND,
    min_visibility: float = MIN_VISIBILITY,
    u_la: int = 1,
    u_rb: int = 1,
    verbose: bool = True,
) -> DotPlan:
    """
    点区传输方案

    Δ_S 取 ε_k̃，g_R 按 |g_L·Q_{k̃,a}| = |g_R·Q_{k̃,b}| 平衡。

    Args:
        spectrum: 液滴基态谱
        setup: 寄存器设置（g_l 为静态耦合；ratio 给出时忽略）
        mode: 模式编号 k̃，None 时自动选择
        ratio: 给出时令 |g_L·Q_{k̃,a}| = ratio·相邻模式间隔

    Raises:
        PreconditionError: 注入点上模式振幅过小或耦合缺失
    """
    if mode is None:
        mode = select_mode(spectrum, setup.site_a, setup.site_b)
    if not 0 <= mode < spectrum.n_modes:
        raise PreconditionError(f"模式编号 {mode} 超出范围 0..{spectrum.n_modes - 1}")
    q_a = complex(spectrum.q[mode, setup.site_a])
    q_b = complex(spectrum.q[mode, setup.site_b])
    if min(abs(q_a), abs(q_b)) < min_visibility:
        raise PreconditionError(
            f"模式 {mode} 在注入点上的振幅过小（|Q_a| = {abs(q_a):.3e}, |Q_b| = {abs(q_b):.3e}）",
            code="MODE_INVISIBLE",
            suggestion=f"换用其他模式，例如 select_mode() 给出的 {select_mode(spectrum, setup.site_a, setup.site_b)}"
        )
    energy = float(spectrum.eps[mode])
    spacing = spectrum.mode_spacing(mode)
    if spacing <= 1e-9:
        raise PreconditionError(
            f"模式 {mode} 与相邻模式简并（间隔 {spacing:.2e}），无法单独共振",
            code="MODE_DEGENERATE",
            suggestion="换用非简并模式或改变液滴尺寸"
        )

    if ratio is not None:
        g_l = ratio * spacing / abs(q_a)
    else:
        g_l = float(setup.g_l)
    if g_l <= 0:
        raise PreconditionError("点区传输需要正的 g_L", suggestion="在配置中设置 transfer.ratio 或 g_l")
    g_r = g_l * abs(q_a) / abs(q_b)
    tunneling = g_l * abs(q_a) / np.sqrt(2.0)
    resolvability = max(g_l * abs(q_a), g_r * abs(q_b)) / spacing
    if resolvability > resolvability_bound:
        print(f"[警告] 可分辨比 {resolvability:.3f} 超过上限 {resolvability_bound}")

    # H_{L,k̃} = −(i/√2)·g·U·Q*，相位 φ_a = arg(−i·U·Q*_{k̃,a})
    phase_a = float(np.angle(-1j * u_la * np.conj(q_a)))
    phase_b = float(np.angle(-1j * u_rb * np.conj(q_b)))
    plan = DotPlan(
        mode_index=int(mode),
        mode_energy=energy,
        g_l=float(g_l),
        g_r=float(g_r),
        tunneling=float(tunneling),
        transfer_time=float(np.pi / (np.sqrt(2.0) * tunneling)),
        phase=float(np.angle(np.exp(1j * (phase_a - phase_b)))),
        phase_a=phase_a,
        phase_b=phase_b,
        q_a=q_a,
        q_b=q_b,
        spacing=float(spacing),
        resolvability=float(resolvability),
        setup=replace(setup, delta_s=energy, g_l=float(g_l), g_r=float(g_r)),
    )
    if verbose:
        print(f"[传输] 点区方案: k̃ = {mode}, ε = {energy:.5f}, t = {tunneling:.3e}, "
              f"τ = {plan.transfer_time:.2f}, 可分辨比 {resolvability:.3f}")
    return plan


def three_mode_hamiltonian(plan: DotPlan) -> np.ndarray:
    """旋转系下的有效三模哈密顿量，基 [L, k̃, R]，寄存器对角元为失谐 Δ_S − ε_k̃"""
    t = plan.tunneling
    H = np.zeros((3, 3), dtype=complex)
    H[0, 0] = H[2, 2] = plan.setup.delta_s - plan.mode_energy
    H[0, 1] = t * np.exp(1j * plan.phase_a)
    H[1, 0] = np.conj(H[0, 1])
    H[1, 2] = t * np.exp(-1j * plan.phase_b)
    H[2, 1] = np.conj(H[1, 2])
    return H


def three_mode_propagator(plan: DotPlan, t: float) -> np.ndarray:
    """
    三模传播子 exp(−iHt)

    t = τ 时 L -> −e^{−iφ}·R，k̃ -> −k̃。
    """
    return expm(-1j * three_mode_hamiltonian(plan) * t)


def detuned(plan: DotPlan, offset: float) -> DotPlan:
    """Δ_S 偏离 ε_k̃ 的方案（耦合与 τ 不变）"""
    return replace(plan, setup=replace(plan.setup, delta_s=plan.setup.delta_s + offset))


def run_dot_transfer(
    spectrum: Spectrum,
    plan: DotPlan,
    form: str = "secular",
    method: str = "exact",
    samples: int = 201,
    dt: Optional[float] = None,
    verbose: bool = True,
) -> Tuple[TransferTrace, np.ndarray]:
    """
    执行点区传输

    Returns:
        (从 L 出发的轨迹, 末态 2x2 寄存器块 u[输出, 输入])
    """
    ham = extend_hamiltonian(spectrum, plan.setup, form=form)
    return evolve_block(ham, plan.transfer_time, method=method, samples=samples, dt=dt, verbose=verbose)
