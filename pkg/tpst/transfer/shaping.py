# coding=utf-8
"""
液滴区波包整形

发射：g_L(t) = √v_c·|f(t)|/√(∫_t^∞|f|²)，尾积分低于 ε_res 后截断为 0；
接收：到达包络 f_in(t) = f(t − d/v)，g_R(t) = √v_c·|f_in(t)|/√(∫_0^t|f_in|²)，
头积分低于 ε_res 前为 0。v_c = 1/(π·ν_a) 为注入点的有效耦合速度，
ν_a 为注入点局域边缘态密度（手征环上 v_c = 2v）。
脉冲相位 θ(t) = λ∫_0^t|g|² 抵消寄存器随耦合的能移 λ|g|²。
"""

from dataclasses import replace
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid, trapezoid

from tpst.fermion.bands import EDGE_ROWS
from tpst.fermion.hamiltonian import Spectrum
from tpst.model.lattice import Lattice
from tpst.transfer.evolve import evolve
from tpst.transfer.hamiltonian import extend_hamiltonian
from tpst.transfer.models import EdgeRoute, Pulse, RegisterSetup, TransferTrace, WavepacketPlan
from tpst.utils.errors import ChiralityError, PreconditionError

EPS_RES = 1e-4
CAP_WARNING_FRACTION = 0.5
DOS_WINDOW = 0.25               # 态密度能窗半宽（相对 Δ_S）
UPSTREAM_CELLS = 10


# === 目标包络 ===

def gaussian_profile(times: np.ndarray, center: float, sigma: float) -> np.ndarray:
    """|f|² 为中心 center、标准差 sigma 的归一化高斯"""
    times = np.asarray(times, dtype=float)
    return (2.0 * np.pi * sigma ** 2) ** -0.25 * np.exp(-((times - center) ** 2) / (4.0 * sigma ** 2))


def exponential_profile(times: np.ndarray, rate: float) -> np.ndarray:
    """f(t) = √η·e^{−ηt/2}·θ(t)"""
    times = np.asarray(times, dtype=float)
    return np.where(times >= 0, np.sqrt(rate) * np.exp(-0.5 * rate * times), 0.0)


def _normalized(times: np.ndarray, profile: np.ndarray) -> np.ndarray:
    weight = trapezoid(np.abs(profile) ** 2, times)
    if weight <= 0:
        raise PreconditionError("目标包络全为零")
    return profile / np.sqrt(weight)


# === 局域态密度 ===

def local_density(spectrum: Spectrum, site: int, energy: float, half_width: float) -> float:
    """能窗 [energy ± half_width] 内的局域态密度 ν = 平均|Q_{k,site}|²/平均间隔"""
    eps = spectrum.eps
    window = np.where(np.abs(eps - energy) <= half_width)[0]
    if len(window) < 3:
        raise PreconditionError(
            f"能量 {energy:.4f} 附近 ±{half_width:.4f} 内模式数不足（{len(window)}）",
            suggestion="增大液滴或放宽能窗"
        )
    mean_weight = float(np.mean(np.abs(spectrum.q[window, site]) ** 2))
    mean_spacing = float(np.mean(np.diff(eps[window])))
    return mean_weight / mean_spacing


def coupling_velocity(spectrum: Spectrum, site: int, energy: float, half_width: float) -> float:
    """v_c = 1/(π·ν)，发射率 Γ = g²/v_c"""
    return 1.0 / (np.pi * local_density(spectrum, site, energy, half_width))


def lamb_coefficient(spectrum: Spectrum, site: int, energy: float, half_width: float) -> float:
    """
    寄存器能移系数 λ = Σ_k |x_k|²/(Δ_S − ε_k)，x_k = Q_{k,site}/√2

    能窗内的共振模式不计入（平坦态密度下其主值贡献相互抵消）。
    寄存器能量随耦合移动 λ|g|²。
    """
    detuning = energy - spectrum.eps
    outside = np.abs(detuning) > half_width
    weights = 0.5 * np.abs(spectrum.q[outside, site]) ** 2
    return float(np.sum(weights / detuning[outside]))


# === 方案与脉冲 ===

def droplet_plan(
    spectrum: Spectrum,
    setup: RegisterSetup,
    times: np.ndarray,
    profile: np.ndarray,
    velocity: float,
    arc_length: float,
    delay: Optional[float] = None,
    g_max: Optional[float] = None,
    eps_res: float = EPS_RES,
    strict: bool = True,
    compensate: bool = True,
    verbose: bool = True,
) -> WavepacketPlan:
    """
    液滴区传输方案

    Args:
        spectrum: 边缘谱（液滴或手征环）
        setup: 寄存器设置，Δ_S 位于边缘带内
        times: 均匀时间网格，从 0 开始
        profile: 目标包络 f(t)（自动归一化）
        velocity: 边缘群速度 v
        arc_length: 从 a 沿手征方向到 b 的弧长
        delay: 到达延迟，默认 arc_length/v
        g_max: 耦合上限，默认 Δ_S/3
        strict: 延迟短于手征传播时间时是否报错
        compensate: 给脉冲加相位 θ(t) = λ∫|g|²，抵消随耦合变化的寄存器能移

    Raises:
        ChiralityError: strict 且 delay < arc_length/v
    """
    times = np.asarray(times, dtype=float)
    if len(times) < 3 or not np.allclose(np.diff(times), times[1] - times[0]):
        raise PreconditionError("时间网格必须均匀且至少 3 个点")
    if velocity <= 0:
        raise PreconditionError(f"群速度必须为正，收到 {velocity}")
    half_width = DOS_WINDOW * setup.delta_s
    v_a = coupling_velocity(spectrum, setup.site_a, setup.delta_s, half_width)
    v_b = coupling_velocity(spectrum, setup.site_b, setup.delta_s, half_width)
    window = np.abs(spectrum.eps - setup.delta_s) <= half_width
    edge_length = 1.0 / float(np.mean(np.abs(spectrum.q[window, setup.site_a]) ** 2))
    lamb_a = lamb_coefficient(spectrum, setup.site_a, setup.delta_s, half_width) if compensate else 0.0
    lamb_b = lamb_coefficient(spectrum, setup.site_b, setup.delta_s, half_width) if compensate else 0.0

    plan = WavepacketPlan(
        times=times,
        profile=_normalized(times, np.asarray(profile, dtype=float)),
        velocity=float(velocity),
        edge_length=edge_length,
        coupling_velocity=v_a,
        coupling_velocity_b=v_b,
        arc_length=float(arc_length),
        delay=float(arc_length / velocity if delay is None else delay),
        g_max=float(setup.delta_s / 3.0 if g_max is None else g_max),
        eps_res=float(eps_res),
        lamb_a=lamb_a,
        lamb_b=lamb_b,
        setup=setup,
    )
    plan.emission = shape_emission(plan)
    plan.retrieval = shape_retrieval(plan, strict=strict)
    plan.setup = replace(setup, g_l=plan.emission, g_r=plan.retrieval)
    if verbose:
        print(f"[整形] v_c = {v_a:.4f}（a）/ {v_b:.4f}（b），l_eff = {edge_length:.1f}，"
              f"延迟 {plan.delay:.2f}，g 峰值 {plan.emission.peak:.4f}/{plan.retrieval.peak:.4f}，"
              f"λ = {lamb_a:.4f}/{lamb_b:.4f}")
    return plan


def _shape(times, amplitude, weight, v_c, g_max, eps_res, lamb=0.0) -> Pulse:
    g = np.zeros_like(times)
    active = weight > eps_res
    g[active] = np.sqrt(v_c) * amplitude[active] / np.sqrt(weight[active])
    capped = g > g_max
    g = np.minimum(g, g_max)
    support = max(int(np.count_nonzero(g)), 1)
    fraction = float(np.count_nonzero(capped)) / support
    if fraction > CAP_WARNING_FRACTION:
        print(f"[警告] 脉冲 {fraction:.0%} 的采样处于上限 g_max = {g_max:.4g}，包络由上限主导")
    phase = cumulative_trapezoid(lamb * g ** 2, times, initial=0.0) if lamb != 0.0 else None
    return Pulse(times=times, samples=g, g_max=g_max, eps_res=eps_res, capped_fraction=fraction, phase=phase)


def emission_tail(plan: WavepacketPlan) -> np.ndarray:
    """∫_t^T |f|² dt′"""
    density = np.abs(plan.profile) ** 2
    head = cumulative_trapezoid(density, plan.times, initial=0.0)
    return np.maximum(head[-1] - head, 0.0)


def shape_emission(plan: WavepacketPlan) -> Pulse:
    """
    发射脉冲

    同时记录累积量 h(t) = ∫_0^t g²/(2v_c)，寄存器振幅按 e^{−h} 衰减。
    """
    tail = emission_tail(plan)
    pulse = _shape(plan.times, np.abs(plan.profile), tail, plan.coupling_velocity, plan.g_max, plan.eps_res,
                   plan.lamb_a)
    plan.h = cumulative_trapezoid(pulse.samples ** 2 / (2.0 * plan.coupling_velocity), plan.times, initial=0.0)
    return pulse


def arrival_profile(plan: WavepacketPlan) -> np.ndarray:
    """到达 b 的包络 f(t − d/v)"""
    return np.interp(plan.times - plan.delay, plan.times, np.abs(plan.profile), left=0.0, right=0.0)


def shape_retrieval(plan: WavepacketPlan, strict: bool = True) -> Pulse:
    """
    接收脉冲：发射构造的时间反演，延迟 d/v

    Raises:
        ChiralityError: strict 且延迟短于 a -> b 的手征传播时间
    """
    travel = plan.arc_length / plan.velocity
    if plan.delay < travel - plan.dt:
        message = (f"延迟 {plan.delay:.3f} 短于沿手征方向 a -> b 的传播时间 {travel:.3f}，"
                   f"波包无法按时到达")
        if strict:
            raise ChiralityError(message)
        print(f"[警告] {message}")
    if plan.delay > plan.times[-1]:
        raise PreconditionError(f"延迟 {plan.delay:.3f} 超出时间网格 {plan.times[-1]:.3f}")
    incoming = arrival_profile(plan)
    head = cumulative_trapezoid(incoming ** 2, plan.times, initial=0.0)
    return _shape(plan.times, incoming, head, plan.coupling_velocity_b, plan.g_max, plan.eps_res, plan.lamb_b)


# === 圆柱底边路线 ===

def edge_route(
    lattice: Lattice,
    velocity: float,
    arc: int,
    origin: Optional[int] = None,
    upstream_cells: int = UPSTREAM_CELLS,
    rows: int = EDGE_ROWS,
) -> EdgeRoute:
    """
    底边两个悬挂 B_y(i, 0) 之间的路线

    b 位于 a 沿手征方向（velocity 的符号）arc 个元胞处；upstream 为反手征方向上
    与 b 对称的位置起 upstream_cells 个元胞内、前 rows 行的全部位点，用于记录反向泄漏。

    Raises:
        PreconditionError: 非圆柱几何、速度为 0 或路线超出周长
    """
    g = lattice.geometry
    if g.kind != "cylinder":
        raise PreconditionError(f"边缘路线需要圆柱几何，收到 {g.kind}")
    if velocity == 0:
        raise PreconditionError("群速度不能为 0")
    if arc < 1 or 2 * arc + upstream_cells >= g.ly:
        raise PreconditionError(
            f"弧长 {arc} 与上游 {upstream_cells} 个元胞超出周长 L_y = {g.ly}",
            suggestion="增大 L_y"
        )
    direction = 1 if velocity > 0 else -1
    i_a = g.ly // 2 if origin is None else origin % g.ly
    cells = {(i_a - direction * m) % g.ly for m in range(arc, arc + upstream_cells)}
    upstream = tuple(s.index for s in lattice.sites if s.cell[0] in cells and s.cell[1] < rows)
    return EdgeRoute(
        site_a=lattice.site_index(i_a, 0, "B_y"),
        site_b=lattice.site_index(i_a + direction * arc, 0, "B_y"),
        arc_length=float(arc),
        direction=direction,
        upstream=upstream,
    )


def cylinder_length(velocity: float, sigma: float, arc: int, upstream_cells: int = UPSTREAM_CELLS) -> int:
    """
    最小奇数周长 L_y

    未被 b 吸收的残余沿手征方向绕行，前沿（5σ）在运行结束（中心 + 延迟 + 5σ）之前
    不得进入上游记录区：L_y > upstream + 2·arc + 10σ|v|。
    """
    ly = int(np.ceil(upstream_cells + 2 * arc + 10.0 * sigma * abs(velocity))) + 1
    return ly if ly % 2 else ly + 1


# === 执行与诊断 ===

def run_droplet_transfer(
    spectrum: Spectrum,
    plan: WavepacketPlan,
    method: str = "split4",
    dt: Optional[float] = None,
    region: Optional[Sequence[int]] = None,
    record_every: Optional[int] = None,
    verbose: bool = True,
) -> TransferTrace:
    """按方案中的发射/接收脉冲演化 secular 扩展哈密顿量（从 L 出发）"""
    ham = extend_hamiltonian(spectrum, plan.setup, form="secular")
    return evolve(
        ham,
        "L",
        float(plan.times[-1]),
        dt=dt,
        method=method,
        region=region,
        record_every=record_every,
        verbose=verbose,
    )


def emitted_profile(trace: TransferTrace) -> np.ndarray:
    """√max(0, −d|c_L|²/dt)"""
    rate = -np.gradient(np.abs(trace.amp_l) ** 2, trace.times)
    return np.sqrt(np.maximum(rate, 0.0))


def absorbed_profile(trace: TransferTrace) -> np.ndarray:
    """√max(0, d|c_R|²/dt)"""
    rate = np.gradient(np.abs(trace.amp_r) ** 2, trace.times)
    return np.sqrt(np.maximum(rate, 0.0))


def arrival_time(trace: TransferTrace, profile: Optional[np.ndarray] = None) -> float:
    """吸收包络峰值时刻（抛物线插值）"""
    if profile is None:
        profile = absorbed_profile(trace)
    i = int(np.argmax(profile))
    if i == 0 or i == len(profile) - 1:
        return float(trace.times[i])
    y0, y1, y2 = profile[i - 1], profile[i], profile[i + 1]
    denom = y0 - 2.0 * y1 + y2
    offset = 0.0 if denom == 0 else 0.5 * (y0 - y2) / denom
    return float(trace.times[i] + offset * (trace.times[i + 1] - trace.times[i]))
