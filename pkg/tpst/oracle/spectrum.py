# coding=utf-8
"""
精确对角化与扇区预测

exact_spectrum 直接对角化 2^N 维自旋哈密顿量；sector_prediction 枚举
配对图的余树变量，每个扇区求自由费米子多体能级并按宇称规则投影：
(−1)^{N_occ} = s·(−1)^{N+P}·Πû·det W，
s 为把全部 Majorana 重排为 [配对..., 物质...] 的置换符号，P 为配对数，
W 为物质模式的实正交标架。
"""

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import eigvalsh
from scipy.sparse import csr_matrix, identity, kron
from scipy.sparse.csgraph import breadth_first_order, connected_components

from tpst.fermion.hamiltonian import QuadraticHamiltonian, Spectrum, diagonalize
from tpst.model.lattice import FLAVORS
from tpst.oracle.cluster import C_FLAVOR, SpinCluster
from tpst.utils.errors import ConfigError, NumericalError, PreconditionError
from tpst.utils.parallel import parallel_map

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_FLAVOR_OF = ("x", "y", "z")
MATCH_TOLERANCE = 1e-8
DEGENERACY_TOLERANCE = 1e-8


# === 自旋空间 ===

def site_operator(op: np.ndarray, spin: int, n_spins: int):
    """单自旋算符（自旋 0 为最低位）"""
    return kron(identity(2 ** (n_spins - spin - 1), format="csr"),
                kron(csr_matrix(op), identity(2 ** spin, format="csr")), format="csr")


def spin_hamiltonian(cluster: SpinCluster) -> np.ndarray:
    """稠密自旋哈密顿量 Σ ½J·σσ + Σ h·σ^z"""
    n = cluster.n_spins
    H = csr_matrix((2 ** n, 2 ** n), dtype=complex)
    for bond in cluster.bonds:
        if bond.coupling == 0:
            continue
        H = H + 0.5 * bond.coupling * (
            site_operator(PAULI[bond.flavor_s], bond.s, n) @ site_operator(PAULI[bond.flavor_t], bond.t, n)
        )
    for spin, h in cluster.fields:
        H = H + h * site_operator(PAULI["z"], spin, n)
    dense = H.toarray()
    defect = float(np.max(np.abs(dense - dense.conj().T), initial=0.0))
    if defect > 1e-12:
        raise NumericalError(f"自旋哈密顿量非厄米，偏差 {defect:.3e}", code="NOT_HERMITIAN")
    return dense


def exact_spectrum(cluster: SpinCluster) -> np.ndarray:
    """全部 2^N 个本征值（升序）"""
    return np.sort(eigvalsh(spin_hamiltonian(cluster)))


# === 配对图 ===

@dataclass
class PairGraph:
    """配对图的生成树/余树分解"""

    tree: List[int]
    cotree: List[int]

    @property
    def n_sectors(self) -> int:
        return 2 ** len(self.cotree)


def _find(parent: List[int], x: int) -> int:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def pair_graph(cluster: SpinCluster) -> PairGraph:
    """
    按配对顺序用并查集取生成树

    Raises:
        ConfigError: 配对图不连通（投影计数不成立）
    """
    n = cluster.n_spins
    rows = [p.spins[0] for p in cluster.pairs]
    cols = [p.spins[1] for p in cluster.pairs]
    adjacency = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    n_components, _ = connected_components(adjacency, directed=False)
    if n_components != 1:
        raise ConfigError(f"配对图有 {n_components} 个连通分量", suggestion="检查悬挂配对与寄存器配对是否覆盖全部自旋")
    parent = list(range(n))
    tree, cotree = [], []
    for k, pair in enumerate(cluster.pairs):
        a, b = (_find(parent, s) for s in pair.spins)
        if a == b:
            cotree.append(k)
        else:
            parent[a] = b
            tree.append(k)
    return PairGraph(tree=tree, cotree=cotree)


def _permutation_sign(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = order[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# === 扇区 ===

@dataclass
class ProjectorSpec:
    """单个规范扇区：配对取值与允许的占据宇称"""

    cotree_signs: Tuple[int, ...]
    u: Tuple[int, ...]
    allowed_parity: int                 # (−1)^{N_occ} 的允许值
    vacuum_energy: float
    energies: List[float] = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.energies)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cotree_signs": list(self.cotree_signs),
            "allowed_parity": self.allowed_parity,
            "vacuum_energy": self.vacuum_energy,
            "energies": list(self.energies),
        }


@dataclass
class SectorPrediction:
    """全部扇区的投影多体谱"""

    sectors: List[ProjectorSpec]
    energies: np.ndarray

    @property
    def dimension(self) -> int:
        return len(self.energies)


def matter_hamiltonian(cluster: SpinCluster, u: Sequence[int]) -> QuadraticHamiltonian:
    """给定配对取值下的物质二次型（行顺序为 cluster.matter）"""
    matter = cluster.matter
    row = {m: k for k, m in enumerate(matter)}
    A = np.zeros((len(matter), len(matter)))
    for k, bond in enumerate(cluster.bonds):
        if bond.coupling == 0:
            continue
        p = cluster.bond_pair(k)
        cs, ct = row[4 * bond.s + C_FLAVOR], row[4 * bond.t + C_FLAVOR]
        A[cs, ct] += -bond.coupling * u[p]
        A[ct, cs] -= -bond.coupling * u[p]
    for spin, h in cluster.fields:
        bz, c = row[4 * spin + 2], row[4 * spin + C_FLAVOR]
        A[bz, c] += 2.0 * h
        A[c, bz] -= 2.0 * h
    return QuadraticHamiltonian(A=A, kappa=max(cluster.kappa, 1e-12))


def mode_frame(spectrum: Spectrum) -> np.ndarray:
    """实正交标架 W，行为 [x_1, y_1, x_2, y_2, ...]，c_k = ½(x_k + i·y_k)·μ"""
    rows = []
    for q in spectrum.q:
        rows.append(np.sqrt(2.0) * q.real)
        rows.append(np.sqrt(2.0) * q.imag)
    return np.array(rows)


def sector_spec(cluster: SpinCluster, graph: PairGraph, signs: Tuple[int, ...]) -> ProjectorSpec:
    u = [1] * len(cluster.pairs)
    for k, s in zip(graph.cotree, signs):
        u[k] = s
    spectrum = diagonalize(matter_hamiltonian(cluster, u))
    order = [m for p in cluster.pairs for m in (p.first, p.second)] + cluster.matter
    sign = _permutation_sign(order)
    det_w = float(np.linalg.det(mode_frame(spectrum)))
    allowed = int(round(sign * (-1) ** (cluster.n_spins + len(cluster.pairs)) * np.prod(u) * np.sign(det_w)))

    n_modes = spectrum.n_modes
    bits = (np.arange(2 ** n_modes)[:, None] >> np.arange(n_modes)[None, :]) & 1
    parity = 1 - 2 * (bits.sum(axis=1) % 2)
    levels = spectrum.vacuum_energy + bits @ spectrum.eps
    return ProjectorSpec(
        cotree_signs=tuple(signs),
        u=tuple(u),
        allowed_parity=allowed,
        vacuum_energy=spectrum.vacuum_energy,
        energies=sorted(float(e) for e in levels[parity == allowed]),
    )


def sector_prediction(cluster: SpinCluster, jobs: Optional[int] = None) -> SectorPrediction:
    """
    枚举全部扇区的投影自由费米子谱

    Raises:
        NumericalError: 总维数不等于 2^N（宇称规则错误）
    """
    graph = pair_graph(cluster)
    assignments = list(product((1, -1), repeat=len(graph.cotree)))
    sectors = parallel_map(lambda signs: sector_spec(cluster, graph, signs), assignments, jobs)
    energies = np.sort(np.concatenate([s.energies for s in sectors]))
    if len(energies) != cluster.dimension:
        raise NumericalError(
            f"投影后总维数 {len(energies)} 不等于 2^N = {cluster.dimension}",
            code="DIMENSION_MISMATCH",
        )
    return SectorPrediction(sectors=sectors, energies=energies)


def compare_spectra(cluster: SpinCluster, jobs: Optional[int] = None) -> Dict[str, Any]:
    """精确谱与扇区预测的逐能级比较"""
    exact = exact_spectrum(cluster)
    predicted = sector_prediction(cluster, jobs)
    mismatch = float(np.max(np.abs(exact - predicted.energies)))
    print(f"[验证] {cluster.n_spins} 自旋: {len(predicted.sectors)} 个扇区, 最大偏差 {mismatch:.2e}")
    return {
        "n_spins": cluster.n_spins,
        "dimension": cluster.dimension,
        "n_sectors": len(predicted.sectors),
        "max_mismatch": mismatch,
        "exact": [float(e) for e in exact],
        "sectors": [s.to_dict() for s in predicted.sectors],
    }


# === 环路算符 ===

@dataclass
class LoopOperator:
    """余树配对 pair 的基本环路 Πû 在自旋空间中的表示"""

    pair: int
    spins: Tuple[int, ...]
    matrix: np.ndarray


def _tree_path(cluster: SpinCluster, graph: PairGraph, start: int, end: int) -> List[int]:
    """生成树上 start -> end 的配对序列"""
    n = cluster.n_spins
    rows, cols = [], []
    via: Dict[Tuple[int, int], int] = {}
    for k in graph.tree:
        a, b = cluster.pairs[k].spins
        rows += [a, b]
        cols += [b, a]
        via[(a, b)] = via[(b, a)] = k
    tree = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, predecessors = breadth_first_order(tree, start, directed=False, return_predecessors=True)
    spins = [end]
    while spins[-1] != start:
        spins.append(int(predecessors[spins[-1]]))
    spins.reverse()
    return [via[(spins[k], spins[k + 1])] for k in range(len(spins) - 1)]


def loop_operator(cluster: SpinCluster, graph: PairGraph, pair_index: int) -> LoopOperator:
    """
    余树配对的基本环路

    Πû = −i^m·Πε_t·Π_s σ^{in}_s σ^{out}_s，
    ε_t = +1 当第 t 个配对的 first 位于出发自旋上。
    """
    pair = cluster.pairs[pair_index]
    start, end = pair.spins
    steps = [(pair_index, start)] + [(k, None) for k in _tree_path(cluster, graph, end, start)]
    flavors_in: Dict[int, str] = {}
    flavors_out: Dict[int, str] = {}
    eps_product = 1
    here = start
    visited = []
    for k, _ in steps:
        p = cluster.pairs[k]
        if p.first // 4 == here:
            out_m, in_m = p.first, p.second
        else:
            out_m, in_m = p.second, p.first
            eps_product = -eps_product
        flavors_out[here] = _FLAVOR_OF[out_m % 4]
        visited.append(here)
        here = in_m // 4
        flavors_in[here] = _FLAVOR_OF[in_m % 4]
    if here != start:
        raise NumericalError(f"配对 {pair_index} 的基本环路未闭合")

    n = cluster.n_spins
    m = len(steps)
    matrix = identity(2 ** n, dtype=complex, format="csr")
    for s in visited:
        matrix = matrix @ site_operator(PAULI[flavors_in[s]] @ PAULI[flavors_out[s]], s, n)
    prefactor = -(1j ** m) * eps_product
    return LoopOperator(pair=pair_index, spins=tuple(visited), matrix=prefactor * matrix.toarray())


def loop_operators(cluster: SpinCluster) -> List[LoopOperator]:
    """配对图全部基本环路（每个余树配对一个）"""
    graph = pair_graph(cluster)
    return [loop_operator(cluster, graph, k) for k in graph.cotree]


# === 基态简并 ===

def dangling_count(cluster: SpinCluster) -> int:
    """晶格自旋上未参与任何键的 b 型 Majorana 数"""
    used = set()
    for bond in cluster.bonds:
        used.add((bond.s, bond.flavor_s))
        used.add((bond.t, bond.flavor_t))
    return sum((s, f) not in used for s in range(cluster.lattice_spins) for f in FLAVORS)


def ground_degeneracy(cluster: SpinCluster, jobs: Optional[int] = None) -> Dict[str, Any]:
    """精确对角化与扇区枚举给出的基态简并度"""
    exact = exact_spectrum(cluster)
    predicted = sector_prediction(cluster, jobs).energies
    scale = max(1.0, abs(float(exact[0])))
    exact_count = int(np.sum(exact - exact[0] < DEGENERACY_TOLERANCE * scale))
    predicted_count = int(np.sum(predicted - predicted[0] < DEGENERACY_TOLERANCE * scale))
    n_dangling = dangling_count(cluster)
    print(f"[验证] 基态简并度: 精确 {exact_count}, 扇区枚举 {predicted_count}")
    return {
        "ground_energy": float(exact[0]),
        "exact": exact_count,
        "predicted": predicted_count,
        "n_dangling_pairs": len(cluster.pair_index("dangling")),
        "dangling_prediction": 2 ** (n_dangling / 4),
    }
