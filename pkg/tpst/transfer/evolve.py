# coding=utf-8
"""
单粒子演化

三种积分方法：
- exact：静态 H 的本征传播子
- split4：对称分裂（对角相位精确、秩 2 耦合转动精确）的四阶 Yoshida 组合，严格幺正
- rk4：稠密生成元上的经典 RK4

secular 形式演化复振幅 ψ（dψ/dt = −iHψ）；full 形式演化 Majorana 系数 w（dw/dt = A·w），
内部以 y = [z; w_reg] 记录，z = √2·Q_full·w_晶格 为各带符号模式上的振幅。
"""

import math
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import eigh

from tpst.transfer.hamiltonian import ExtendedHamiltonian
from tpst.transfer.models import TransferTrace
from tpst.utils.errors import NumericalError, PreconditionError

METHODS = ("exact", "split4", "rk4")
STEP_RULE = 0.05                # dt·‖H‖ 上限
NORM_TOLERANCE = 1e-8
MAX_HALVINGS = 3
MAX_RECORDS = 4001

_CBRT2 = 2.0 ** (1.0 / 3.0)
YOSHIDA_OUTER = 1.0 / (2.0 - _CBRT2)
YOSHIDA_INNER = -_CBRT2 / (2.0 - _CBRT2)

InitialState = Union[str, Sequence[str], np.ndarray]


# === 初态与读出 ===

def _register_column(ham: ExtendedHamiltonian, which: str) -> np.ndarray:
    col = np.zeros(ham.dim, dtype=complex)
    if which not in ("L", "R"):
        raise PreconditionError(f"未知初态 '{which}'", suggestion="可选: L, R 或振幅向量")
    index = ham.index_l if which == "L" else ham.index_r
    if ham.form == "secular":
        col[index] = 1.0
    else:
        # c† = ½(γ0 − iγ3)
        col[index] = 0.5
        col[index + 1] = -0.5j
    return col


def initial_state(ham: ExtendedHamiltonian, initial: InitialState) -> np.ndarray:
    """初态矩阵（dim x m），列为原生基下的振幅"""
    if isinstance(initial, str):
        return _register_column(ham, initial)[:, None]
    if isinstance(initial, (list, tuple)) and all(isinstance(x, str) for x in initial):
        return np.stack([_register_column(ham, x) for x in initial], axis=1)
    state = np.asarray(initial, dtype=complex)
    if state.ndim == 1:
        state = state[:, None]
    if state.shape[0] != ham.dim:
        raise PreconditionError(f"初态维数 {state.shape[0]} 与哈密顿量维数 {ham.dim} 不一致")
    return state


def _to_modes(ham: ExtendedHamiltonian, w: np.ndarray) -> np.ndarray:
    """full 形式：w -> y = [z; w_reg]"""
    N = ham.spectrum.size
    z = np.sqrt(2.0) * ham.spectrum.q_full @ w[:N]
    return np.vstack([z, w[N:]])


def _readout(ham: ExtendedHamiltonian, y: np.ndarray, region: Optional[np.ndarray]):
    """(amp_L, amp_R, edge_prob, norm, region_prob)，振幅为各列，概率取第一列"""
    n = ham.n_modes
    if ham.form == "secular":
        amp_l, amp_r = y[0], y[n + 1]
        particles = y[1:n + 1]
        norm = float(np.sum(np.abs(y[:, 0]) ** 2))
    else:
        N = ham.spectrum.size
        reg = y[N:]
        amp_l = reg[0] + 1j * reg[1]
        amp_r = reg[2] + 1j * reg[3]
        particles = y[:n]
        norm = float(np.sum(np.abs(y[:N, 0]) ** 2) + 2.0 * np.sum(np.abs(reg[:, 0]) ** 2))
    edge = float(np.sum(np.abs(particles[:, 0]) ** 2))
    region_prob = None
    if region is not None:
        local = ham.spectrum.q[:, region].conj().T @ particles[:, 0]
        region_prob = float(np.sum(np.abs(local) ** 2))
    return amp_l, amp_r, edge, norm, region_prob


class _Recorder:
    def __init__(self, ham: ExtendedHamiltonian, region: Optional[np.ndarray]):
        self.ham = ham
        self.region = region
        self.times, self.amp_l, self.amp_r = [], [], []
        self.edge, self.norm, self.region_prob = [], [], []
        self.last_block = None

    def record(self, t: float, y: np.ndarray) -> None:
        amp_l, amp_r, edge, norm, region_prob = _readout(self.ham, y, self.region)
        self.times.append(t)
        self.amp_l.append(amp_l[0])
        self.amp_r.append(amp_r[0])
        self.edge.append(edge)
        self.norm.append(norm)
        if region_prob is not None:
            self.region_prob.append(region_prob)
        self.last_block = np.vstack([amp_l, amp_r])

    def trace(self, method: str) -> TransferTrace:
        block = self.last_block
        return TransferTrace(
            times=np.asarray(self.times),
            amp_l=np.asarray(self.amp_l),
            amp_r=np.asarray(self.amp_r),
            edge_prob=np.asarray(self.edge),
            norm=np.asarray(self.norm),
            method=method,
            form=self.ham.form,
            block=block if block.shape == (2, 2) else None,
            region_prob=np.asarray(self.region_prob) if self.region_prob else None,
            delta_s=self.ham.setup.delta_s,
        )


# === exact ===

def _evolve_exact(ham, state, t_final, samples, region) -> TransferTrace:
    if not ham.is_static:
        raise PreconditionError("exact 方法只适用于静态耦合", suggestion="含脉冲时请使用 split4 或 rk4")
    M = ham.matrix()
    # secular: e^{−iHt}；full: e^{At} = V e^{−iλt} V†，iA = VλV†
    lam, V = eigh(M if ham.form == "secular" else 1j * M)
    coeffs = V.conj().T @ state
    recorder = _Recorder(ham, region)
    for t in np.linspace(0.0, t_final, samples):
        y = V @ (np.exp(-1j * lam * t)[:, None] * coeffs)
        recorder.record(float(t), y if ham.form == "secular" else _to_modes(ham, y))
    return recorder.trace("exact")


# === split4 ===

def _couple(psi: np.ndarray, reg: int, x: np.ndarray, h: float) -> None:
    """
    秩 2 耦合转动 exp(−ih(e_reg·x† + x·e_reg†))（原地）

    psi 的模式块为 psi[1:n+1]，x 为模式列。
    """
    nx = float(np.linalg.norm(x))
    if nx == 0.0 or h == 0.0:
        return
    theta = h * nx
    c, s = math.cos(theta), math.sin(theta)
    n = len(x)
    modes = psi[1:n + 1]
    proj = x.conj() @ modes
    pl = psi[reg].copy()
    modes += np.outer(x, (c - 1.0) * proj / nx ** 2 - 1j * (s / nx) * pl)
    psi[reg] = c * pl - 1j * (s / nx) * proj


def _strang_secular(ham, psi, t, h, phases_half) -> None:
    n = ham.n_modes
    psi *= phases_half[:, None]
    g_l, g_r = ham.couplings(t + 0.5 * h)
    _couple(psi, 0, g_l * ham.x_l, 0.5 * h)
    _couple(psi, n + 1, g_r * ham.x_r, h)
    _couple(psi, 0, g_l * ham.x_l, 0.5 * h)
    psi *= phases_half[:, None]


def _rotate_register(reg: np.ndarray, i: int, angle: float) -> None:
    c, s = math.cos(angle), math.sin(angle)
    w0, w3 = reg[i].copy(), reg[i + 1].copy()
    reg[i] = c * w0 + s * w3
    reg[i + 1] = -s * w0 + c * w3


def _couple_full(ham, y, reg_index: int, site: int, angle: float, column: np.ndarray) -> None:
    """(γ0, γ_site) 平面内的转动，angle = g·U·h"""
    N = ham.spectrum.size
    if angle == 0.0:
        return
    c, s = math.cos(angle), math.sin(angle)
    z = y[:N]
    w_site = (column.conj() @ z) / np.sqrt(2.0)
    w0 = y[N + reg_index].copy()
    y[N + reg_index] = c * w0 - s * w_site
    new_site = s * w0 + c * w_site
    z += np.sqrt(2.0) * np.outer(column, new_site - w_site)


def _strang_full(ham, y, t, h, columns) -> None:
    N = ham.spectrum.size
    eps = np.concatenate([ham.spectrum.eps, -ham.spectrum.eps])
    delta = ham.setup.delta_s

    def drift(step):
        y[:N] *= np.exp(-1j * eps * step)[:, None]
        _rotate_register(y[N:], 0, delta * step)
        _rotate_register(y[N:], 2, delta * step)

    g_l, g_r = ham.couplings(t + 0.5 * h)
    drift(0.5 * h)
    _couple_full(ham, y, 0, ham.setup.site_a, g_l * ham.u_la * 0.5 * h, columns[0])
    _couple_full(ham, y, 2, ham.setup.site_b, g_r * ham.u_rb * h, columns[1])
    _couple_full(ham, y, 0, ham.setup.site_a, g_l * ham.u_la * 0.5 * h, columns[0])
    drift(0.5 * h)


def _split4_stepper(ham: ExtendedHamiltonian, dt: float):
    weights = (YOSHIDA_OUTER, YOSHIDA_INNER, YOSHIDA_OUTER)
    if ham.form == "secular":
        diag = np.concatenate([[ham.setup.delta_s], ham.spectrum.eps, [ham.setup.delta_s]])
        halves = [np.exp(-0.5j * diag * w * dt) for w in weights]

        def step(y, t):
            for w, half in zip(weights, halves):
                _strang_secular(ham, y, t, w * dt, half)
                t += w * dt
    else:
        q_full = ham.spectrum.q_full
        columns = (q_full[:, ham.setup.site_a], q_full[:, ham.setup.site_b])

        def step(y, t):
            for w in weights:
                _strang_full(ham, y, t, w * dt, columns)
                t += w * dt
    return step


# === rk4 ===

def _rk4_stepper(ham: ExtendedHamiltonian, dt: float):
    static = ham.matrix() if ham.is_static else None

    def generator(t):
        M = static if static is not None else ham.matrix(t)
        return -1j * M if ham.form == "secular" else M

    def step(y, t):
        g0, g1, g2 = generator(t), generator(t + 0.5 * dt), generator(t + dt)
        k1 = g0 @ y
        k2 = g1 @ (y + 0.5 * dt * k1)
        k3 = g1 @ (y + 0.5 * dt * k2)
        k4 = g2 @ (y + dt * k3)
        y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return step


def _evolve_stepped(ham, state, t_final, dt, method, record_every, region) -> TransferTrace:
    n_steps = max(1, int(math.ceil(t_final / dt - 1e-12)))
    dt = t_final / n_steps
    if record_every is None:
        record_every = max(1, int(math.ceil(n_steps / (MAX_RECORDS - 1))))
    native_modes = method == "split4" or ham.form == "secular"
    y = state.copy() if ham.form == "secular" or not native_modes else _to_modes(ham, state)
    step = _split4_stepper(ham, dt) if method == "split4" else _rk4_stepper(ham, dt)

    def observe(t):
        recorder.record(t, y if native_modes else _to_modes(ham, y))

    recorder = _Recorder(ham, region)
    observe(0.0)
    for i in range(n_steps):
        step(y, i * dt)
        if (i + 1) % record_every == 0 or i + 1 == n_steps:
            observe((i + 1) * dt)
    return recorder.trace(method)


def step_size(ham: ExtendedHamiltonian, dt: Optional[float] = None, verbose: bool = True) -> float:
    """满足 dt·‖H‖ <= 0.05 的步长；给定步长过大时自动缩小"""
    limit = STEP_RULE / max(ham.norm_bound(), 1e-300)
    if dt is None:
        return limit
    if dt > limit:
        if verbose:
            print(f"[警告] dt = {dt:.4g} 违反步长规则，自动缩小为 {limit:.4g}")
        return limit
    return float(dt)


def evolve(
    ham: ExtendedHamiltonian,
    initial: InitialState = "L",
    t_final: float = 1.0,
    dt: Optional[float] = None,
    method: str = "split4",
    samples: int = 201,
    record_every: Optional[int] = None,
    region: Optional[Sequence[int]] = None,
    tolerance: float = NORM_TOLERANCE,
    verbose: bool = True,
) -> TransferTrace:
    """
    演化扩展哈密顿量

    Args:
        ham: 扩展哈密顿量
        initial: "L"、"R"、("L", "R") 或原生基下的振幅向量/矩阵
        t_final: 终止时间（单位 1/κ）
        dt: 步长，None 时按步长规则选取
        method: exact / split4 / rk4
        samples: exact 方法的记录点数
        record_every: 步进方法每隔多少步记录一次
        region: 记录该组 Majorana 位点上的概率

    Returns:
        TransferTrace；初态含两列 ("L", "R") 时 block 为末态 2x2 寄存器块

    Raises:
        NumericalError: 步长减半 3 次后范数漂移仍超过容差
    """
    if method not in METHODS:
        raise PreconditionError(f"未知积分方法 '{method}'", suggestion=f"可选: {', '.join(METHODS)}")
    if t_final <= 0:
        raise PreconditionError(f"终止时间必须为正，收到 {t_final}")
    state = initial_state(ham, initial)
    region_idx = None if region is None else np.asarray(list(region), dtype=int)

    if method == "exact":
        trace = _evolve_exact(ham, state, t_final, samples, region_idx)
        if trace.norm_drift > tolerance:
            raise NumericalError(f"exact 传播范数漂移 {trace.norm_drift:.3e}", code="NORM_DRIFT")
        return trace

    dt = step_size(ham, dt, verbose)
    for attempt in range(MAX_HALVINGS + 1):
        trace = _evolve_stepped(ham, state, t_final, dt, method, record_every, region_idx)
        if trace.norm_drift <= tolerance:
            if verbose:
                print(f"[传输] {method}/{ham.form}: T = {t_final:.4g}, dt = {dt:.3g}, "
                      f"F = {trace.fidelity:.6f}, 范数漂移 {trace.norm_drift:.1e}")
            return trace
        if attempt < MAX_HALVINGS:
            print(f"[警告] 范数漂移 {trace.norm_drift:.3e} 超过 {tolerance:.1e}，步长减半")
            dt *= 0.5
    raise NumericalError(
        f"{method} 演化范数漂移 {trace.norm_drift:.3e} 超过容差 {tolerance:.1e}（最终 dt = {dt:.3g}）",
        code="NORM_DRIFT",
        suggestion="减小 dt 或改用 split4"
    )


def evolve_block(ham: ExtendedHamiltonian, t_final: float, **kwargs) -> Tuple[TransferTrace, np.ndarray]:
    """同时演化 L、R 两个初态，返回 (轨迹, 末态 2x2 块 u[输出, 输入])"""
    trace = evolve(ham, ("L", "R"), t_final, **kwargs)
    return trace, trace.block
