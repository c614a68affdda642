# coding=utf-8
"""
多体传输协议

在团簇的 2^N 维自旋空间中执行点区传输，读出四个寄存器乘积态之间的映射，
与理想传输门及单粒子结果比较。

步骤：
1. 取 g = 0 时真空能最低的规范扇区为目标扇区
2. H_pin = −μ·Σ w·L 钉住除 L-R b^y 配对所在环路以外的全部基本环路
3. 每个 (σ^z_L, σ^z_R) 块中 H(0) + H_pin 的最低本征态为寄存器基矢
4. 由目标扇区的晶格物质谱给出点区方案，演化 U = exp(−i(H + H_pin)τ)
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh, expm

from tpst.fermion.hamiltonian import QuadraticHamiltonian, Spectrum, diagonalize
from tpst.oracle.cluster import C_FLAVOR, SpinCluster
from tpst.oracle.spectrum import (
    ProjectorSpec,
    loop_operator,
    pair_graph,
    sector_spec,
    spin_hamiltonian,
)
from tpst.transfer.dot import dot_plan, run_dot_transfer
from tpst.transfer.gate import gate_extract, gate_fidelity, ideal_gate
from tpst.transfer.models import DotPlan
from tpst.utils.errors import LeakageError, PreconditionError

PIN_STRENGTH = 2.0
LEAKAGE_THRESHOLD = 0.05
DEFAULT_RATIO = 0.02


@dataclass
class ProtocolResult:
    """多体协议结果"""

    gate: np.ndarray
    fidelity: float
    leakage: float
    plan: Optional[DotPlan]
    sector: ProjectorSpec
    single_particle_fidelity: Optional[float] = None
    z_angles: Tuple[float, ...] = ()
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "fidelity": self.fidelity,
            "leakage": self.leakage,
            "single_particle_fidelity": self.single_particle_fidelity,
            "z_angles": list(self.z_angles),
            "plan": self.plan.to_dict() if self.plan is not None else None,
            "sector": {"cotree_signs": list(self.sector.cotree_signs), "vacuum_energy": self.sector.vacuum_energy},
            "gate": [[[float(v.real), float(v.imag)] for v in row] for row in self.gate],
        }


def target_sector(cluster: SpinCluster) -> ProjectorSpec:
    """g = 0 时真空能最低的扇区（按枚举顺序取第一个）"""
    free = cluster.with_couplings(0.0, 0.0)
    graph = pair_graph(free)
    best: Optional[ProjectorSpec] = None
    for bits in range(2 ** len(graph.cotree)):
        signs = tuple(-1 if (bits >> k) & 1 else 1 for k in range(len(graph.cotree)))
        spec = sector_spec(free, graph, signs)
        if best is None or spec.vacuum_energy < best.vacuum_energy - 1e-10:
            best = spec
    return best


def lattice_spectrum(cluster: SpinCluster, sector: ProjectorSpec) -> Spectrum:
    """目标扇区中晶格 c Majorana 的准粒子谱（位点编号即自旋编号）"""
    n = cluster.lattice_spins
    A = np.zeros((n, n))
    for k, bond in enumerate(cluster.bonds):
        if bond.kind != "link":
            continue
        u = sector.u[cluster.bond_pair(k)]
        A[bond.s, bond.t] += -bond.coupling * u
        A[bond.t, bond.s] -= -bond.coupling * u
    return diagonalize(QuadraticHamiltonian(A=A, kappa=cluster.kappa))


def pin_hamiltonian(cluster: SpinCluster, sector: ProjectorSpec, mu: float = PIN_STRENGTH) -> np.ndarray:
    """钉扎项 −μ·Σ w·L（跳过经过寄存器 b^y 配对的环路）"""
    graph = pair_graph(cluster)
    H = np.zeros((cluster.dimension, cluster.dimension), dtype=complex)
    for k, sign in zip(graph.cotree, sector.cotree_signs):
        if cluster.pairs[k].kind == "register_y":
            continue
        H -= mu * sign * loop_operator(cluster, graph, k).matrix
    return H


def register_basis(cluster: SpinCluster, H0: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    四个寄存器基矢

    Returns:
        (基矢矩阵 dim x 4，按 n_L + 2·n_R 排列, 对应能量)
    """
    spin_l, spin_r = cluster.registers["L"], cluster.registers["R"]
    index = np.arange(cluster.dimension)
    bit_l = (index >> spin_l) & 1
    bit_r = (index >> spin_r) & 1
    basis = np.zeros((cluster.dimension, 4), dtype=complex)
    energies = np.zeros(4)
    for s in range(4):
        block = np.where((bit_l == (s & 1)) & (bit_r == (s >> 1)))[0]
        w, v = eigh(H0[np.ix_(block, block)])
        if len(w) > 1 and w[1] - w[0] < 1e-9:
            raise PreconditionError(f"寄存器态 {s} 的块内基态简并，钉扎不足", suggestion="增大 oracle.mu")
        basis[block, s] = v[:, 0]
        energies[s] = w[0]
    return basis, energies


def run_spin_protocol(
    cluster: SpinCluster,
    ratio: float = DEFAULT_RATIO,
    mode: Optional[int] = None,
    mu: float = PIN_STRENGTH,
    leakage_threshold: float = LEAKAGE_THRESHOLD,
    couplings: Optional[Tuple[float, float]] = None,
    duration: Optional[float] = None,
) -> ProtocolResult:
    """
    多体点区传输

    Args:
        cluster: 含两个寄存器的团簇
        ratio: 耦合可分辨比
        mode: 传输模式编号，None 时自动选择
        mu: 环路钉扎强度
        couplings: 覆盖 (g_L, g_R)，例如 (0, 0) 检查恒等门
        duration: 覆盖演化时间（默认 τ）

    Raises:
        PreconditionError: 团簇不含寄存器
        LeakageError: 寄存器子空间泄漏超过阈值
    """
    if "L" not in cluster.registers or cluster.setup is None:
        raise PreconditionError("多体协议需要含寄存器的团簇", suggestion="build_cluster(..., registers=setup)")
    sector = target_sector(cluster)
    spectrum = lattice_spectrum(cluster, sector)
    reg_pairs = {cluster.pairs[k].spins[0]: k for k in cluster.pair_index("register")}
    u_la = sector.u[reg_pairs[cluster.registers["L"]]]
    u_rb = sector.u[reg_pairs[cluster.registers["R"]]]

    plan: Optional[DotPlan] = None
    single_fidelity: Optional[float] = None
    delta_s = cluster.setup.delta_s
    if couplings is None:
        plan = dot_plan(spectrum, cluster.setup, mode=mode, ratio=ratio, u_la=u_la, u_rb=u_rb)
        g_l, g_r, delta_s = plan.g_l, plan.g_r, plan.setup.delta_s
        tau = plan.transfer_time if duration is None else duration
        trace, _ = run_dot_transfer(spectrum, plan, form="secular", method="exact", samples=2, verbose=False)
        single_fidelity = gate_extract(trace, plan).fidelity
    else:
        g_l, g_r = couplings
        tau = 1.0 if duration is None else duration

    fields = [(cluster.registers["L"], -0.5 * delta_s), (cluster.registers["R"], -0.5 * delta_s)]
    base = cluster.with_fields(fields)
    H_pin = pin_hamiltonian(base, sector, mu)
    H0 = spin_hamiltonian(base.with_couplings(0.0, 0.0)) + H_pin
    H = spin_hamiltonian(base.with_couplings(g_l, g_r)) + H_pin
    basis, energies = register_basis(base, H0)

    U = expm(-1j * H * tau)
    M = basis.conj().T @ U @ basis * np.exp(1j * energies * tau)[:, None]
    leakage = float(np.max(1.0 - np.sum(np.abs(M) ** 2, axis=0)))
    phi = plan.phase if plan is not None else 0.0
    target = ideal_gate(phi) if plan is not None else np.eye(4, dtype=complex)
    fidelity, angles = gate_fidelity(M, target)
    print(f"[验证] 多体协议: 门保真度 {fidelity:.6f}, 泄漏 {leakage:.2e}"
          + (f", 单粒子 {single_fidelity:.6f}" if single_fidelity is not None else ""))
    if leakage > leakage_threshold:
        raise LeakageError(leakage, leakage_threshold)
    return ProtocolResult(
        gate=M,
        fidelity=fidelity,
        leakage=leakage,
        plan=plan,
        sector=sector,
        single_particle_fidelity=single_fidelity,
        z_angles=angles,
        extra={"u_la": u_la, "u_rb": u_rb, "tau": tau, "mu": mu},
    )
