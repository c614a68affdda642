# coding=utf-8
"""
寄存器门

基 {↑↑, ↓↑, ↑↓, ↓↓}，编号 n_L + 2·n_R（↓ = 占据）。物理相位约定
|↓↑⟩ = i·c_L†|Ω⟩，|↑↓⟩ = c_R†|Ω⟩，|↓↓⟩ = i·c_L†c_R†|Ω⟩。
两寄存器算符写作 np.kron(op_R, op_L)。
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize

from tpst.transfer.models import DotPlan, TransferTrace
from tpst.utils.errors import PreconditionError

SQRT2 = np.sqrt(2.0)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
PHASE_S = np.diag([1.0, 1j])
IDENTITY2 = np.eye(2, dtype=complex)

# 局域 z 转动优化的确定性起点
_STARTS = (
    (0.0, 0.0, 0.0, 0.0),
    (np.pi / 2, -np.pi / 2, 0.0, 0.0),
    (0.0, 0.0, np.pi / 2, -np.pi / 2),
    (np.pi, 0.0, 0.0, np.pi),
    (-np.pi / 2, np.pi / 2, np.pi / 2, -np.pi / 2),
)


@dataclass
class GateResult:
    """提取的寄存器门"""

    matrix: np.ndarray
    ideal: np.ndarray
    fidelity: float
    phase: float                                    # 预期 φ
    z_angles: Tuple[float, ...] = ()                # 最优局域 z 转动 (α_out, β_out, α_in, β_in)
    phases: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fidelity": self.fidelity,
            "phi": self.phase,
            "z_angles": list(self.z_angles),
            "phases": dict(self.phases),
            "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in self.matrix],
            "ideal": [[[float(v.real), float(v.imag)] for v in row] for row in self.ideal],
        }


def local(op_l: np.ndarray, op_r: np.ndarray) -> np.ndarray:
    """op_L ⊗ op_R 在 n_L + 2·n_R 编号下的矩阵"""
    return np.kron(op_r, op_l)


def local_z(alpha: float, beta: float) -> np.ndarray:
    """L 转 α、R 转 β 的局域 z 相位 diag(1, e^{iα}, e^{iβ}, e^{i(α+β)})"""
    return np.diag(np.exp(1j * np.array([0.0, alpha, beta, alpha + beta])))


def ideal_gate(phi: float) -> np.ndarray:
    """理想传输门：↑↑ -> ↑↑，↓↑ -> −ie^{−iφ}↑↓，↑↓ -> ie^{iφ}↓↑，↓↓ -> −↓↓"""
    G = np.zeros((4, 4), dtype=complex)
    G[0, 0] = 1.0
    G[2, 1] = -1j * np.exp(-1j * phi)
    G[1, 2] = 1j * np.exp(1j * phi)
    G[3, 3] = -1.0
    return G


def gate_from_block(u: np.ndarray) -> np.ndarray:
    """由单粒子寄存器块 u[输出, 输入]（L, R）构造 4x4 多体门"""
    G = np.zeros((4, 4), dtype=complex)
    G[0, 0] = 1.0
    G[1, 1] = u[0, 0]
    G[2, 1] = 1j * u[1, 0]
    G[1, 2] = -1j * u[0, 1]
    G[2, 2] = u[1, 1]
    G[3, 3] = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    return G


def _overlap(params: np.ndarray, gate: np.ndarray, ideal: np.ndarray) -> float:
    a_out, b_out, a_in, b_in = params
    product = local_z(a_out, b_out) @ gate @ local_z(a_in, b_in)
    return float(np.abs(np.trace(ideal.conj().T @ product)) ** 2 / 16.0)


def gate_fidelity(gate: np.ndarray, ideal: np.ndarray) -> Tuple[float, Tuple[float, ...]]:
    """
    局域 z 转动优化后的门保真度 max |Tr(G_id†·Z_out·G·Z_in)|²/16

    Returns:
        (保真度, 最优角度)
    """
    best, best_x = -1.0, np.zeros(4)
    for start in _STARTS:
        res = minimize(lambda x: -_overlap(x, gate, ideal), np.asarray(start), method="BFGS")
        value = _overlap(res.x, gate, ideal)
        if value > best:
            best, best_x = value, res.x
    return min(best, 1.0), tuple(float(x) for x in best_x)


def gate_extract(
    trace: TransferTrace,
    plan: Union[DotPlan, float],
    delta_s: Optional[float] = None,
) -> GateResult:
    """
    从 L、R 双初态轨迹提取寄存器门

    末态块乘以 e^{iΔ_S·T} 去掉动力学相位后构造 4x4 门，再与理想门比较。

    Args:
        trace: evolve_block() 的轨迹
        plan: 点区方案，或直接给出预期相位 φ
    """
    if trace.block is None:
        raise PreconditionError(
            "轨迹不含 2x2 寄存器块",
            suggestion="请用 evolve_block() 同时演化 L、R 两个初态"
        )
    phi = plan.phase if isinstance(plan, DotPlan) else float(plan)
    if delta_s is None:
        delta_s = plan.setup.delta_s if isinstance(plan, DotPlan) else trace.delta_s
    u = trace.block * np.exp(1j * delta_s * trace.duration)
    G = gate_from_block(u)
    ideal = ideal_gate(phi)
    fidelity, angles = gate_fidelity(G, ideal)
    phases = {
        "down_up": float(np.angle(G[2, 1])),
        "up_down": float(np.angle(G[1, 2])),
        "down_down": float(np.angle(G[3, 3])),
        "expected_down_up": float(np.angle(ideal[2, 1])),
        "expected_up_down": float(np.angle(ideal[1, 2])),
    }
    trace.phases = phases
    print(f"[传输] 门保真度 {fidelity:.6f}（φ = {phi:.4f}）")
    return GateResult(matrix=G, ideal=ideal, fidelity=fidelity, phase=phi, z_angles=angles, phases=phases)


def transfer_as_swap_cz(phi: float) -> np.ndarray:
    """z 修正后的传输门 W = SWAP·CZ"""
    correction = np.diag(np.exp(1j * np.array([0.0, -np.pi / 2 - phi, np.pi / 2 + phi, 0.0])))
    return correction @ ideal_gate(phi)


def cnot() -> np.ndarray:
    """以 L 为控制、R 为目标的 CNOT（交换 ↓↑ 与 ↓↓）"""
    G = np.eye(4, dtype=complex)
    G[[1, 3]] = G[[3, 1]]
    return G


def remote_cnot(phi: float) -> np.ndarray:
    """两次传输加寄存器内单比特门组成的远程 CNOT"""
    W = transfer_as_swap_cz(phi)
    s_dag = PHASE_S.conj().T
    return (
        local(s_dag, s_dag)
        @ W
        @ local(HADAMARD, IDENTITY2)
        @ W
        @ local(IDENTITY2, HADAMARD @ PHASE_S)
    )
