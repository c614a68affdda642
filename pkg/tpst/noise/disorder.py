# coding=utf-8
"""
静态无序扫描

对点区传输方案注入逐链路耦合扰动、远离边缘的体涡旋对或紧贴边缘的单个涡旋，
按种子统计传输保真度。每个种子用 Philox 计数器生成器独立派生，结果与执行顺序无关。
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from tpst.fermion.hamiltonian import Spectrum, assemble, diagonalize
from tpst.model.gauge import GaugeConfig, dual_path, ground_gauge, insert_vortex_pair
from tpst.model.lattice import Lattice
from tpst.transfer.dot import detuned, dot_plan, run_dot_transfer
from tpst.transfer.models import DotPlan, RegisterSetup
from tpst.transfer.shaping import arrival_time
from tpst.utils.errors import PreconditionError
from tpst.utils.parallel import parallel_map

DISORDER_KINDS = ("jitter", "bulk_pairs", "edge_vortex")
RETUNE_MODES = ("none", "energy")
SWEEP_HEADER = ["seed", "disorder_param", "fidelity", "arrival_time"]

# 同一种子下各随机量的独立子流
_TAG_JITTER = 1
_TAG_VORTEX = 2


@dataclass(frozen=True)
class DisorderSpec:
    """无序设置"""

    kind: str = "jitter"
    strength: float = 0.0               # 耦合扰动幅度 w，δκ ~ U[−w, w]（任何 kind 都叠加）
    n_pairs: int = 1                    # 体涡旋对数
    min_distance: float = 5.0           # 体涡旋到边界的最小距离（单位 ξ）
    localization_length: float = 1.0   # ξ（单位 a）
    retune: str = "none"

    def __post_init__(self):
        if self.kind not in DISORDER_KINDS:
            raise PreconditionError(f"未知无序类型 '{self.kind}'", suggestion=f"可选: {', '.join(DISORDER_KINDS)}")
        if self.retune not in RETUNE_MODES:
            raise PreconditionError(f"未知重调方式 '{self.retune}'", suggestion=f"可选: {', '.join(RETUNE_MODES)}")
        if self.strength < 0:
            raise PreconditionError(f"扰动幅度必须非负，收到 {self.strength}")
        if self.n_pairs < 1 or self.localization_length <= 0:
            raise PreconditionError("涡旋对数与局域长度必须为正")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _generator(seed: int, tag: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), tag])))


def link_jitter(lattice: Lattice, strength: float, seed: int) -> np.ndarray:
    """逐链路扰动 δκ_l ~ U[−w, w]，由 (seed, 链路编号) 唯一确定"""
    if strength == 0:
        return np.zeros(lattice.n_links)
    return _generator(seed, _TAG_JITTER).uniform(-strength, strength, size=lattice.n_links)


def bulk_candidates(lattice: Lattice, min_distance: float) -> List[int]:
    """中心到所有边界位点距离大于 min_distance 的十二边形"""
    boundary = np.array([lattice.sites[s].position for s in lattice.boundary_sites()])
    result = []
    for p in lattice.plaquettes_of_kind("dodecagon"):
        if len(boundary) == 0:
            result.append(p.index)
            continue
        center = np.array(lattice.plaquette_center(p))
        if np.min(np.linalg.norm(boundary - center, axis=1)) > min_distance:
            result.append(p.index)
    return result


def disordered_gauge(lattice: Lattice, spec: DisorderSpec, seed: int) -> GaugeConfig:
    """
    按种子生成一个涡旋实现

    Raises:
        PreconditionError: 液滴内部没有足够的远离边界的格子，或没有边界弧
    """
    gauge = ground_gauge(lattice)
    rng = _generator(seed, _TAG_VORTEX)
    if spec.kind == "bulk_pairs":
        candidates = bulk_candidates(lattice, spec.min_distance * spec.localization_length)
        if len(candidates) < 2 * spec.n_pairs:
            raise PreconditionError(
                f"只有 {len(candidates)} 个格子距边界超过 {spec.min_distance}ξ，放不下 {spec.n_pairs} 对涡旋",
                code="NO_BULK_ROOM",
                suggestion="增大液滴或减小 min_distance"
            )
        chosen = rng.choice(candidates, size=2 * spec.n_pairs, replace=False)
        for k in range(spec.n_pairs):
            gauge = insert_vortex_pair(gauge, dual_path(lattice, int(chosen[2 * k]), int(chosen[2 * k + 1])))
    elif spec.kind == "edge_vortex":
        links = sorted({
            lattice.link_between(arc[k], arc[k + 1])
            for arc in lattice.boundary_arcs
            for k in range(len(arc) - 1)
        })
        if not links:
            raise PreconditionError("晶格没有边界弧，无法放置边缘涡旋", suggestion="使用 droplet 几何")
        gauge = gauge.flip_links([int(rng.choice(links))])
    return gauge


def realization(lattice: Lattice, spec: DisorderSpec, seed: int, kappa: float = 1.0) -> Spectrum:
    """单个无序实现的准粒子谱"""
    gauge = disordered_gauge(lattice, spec, seed)
    jitter = link_jitter(lattice, spec.strength, seed)
    return diagonalize(assemble(lattice, gauge, kappa, jitter=jitter))


def retuned(plan: DotPlan, spectrum: Spectrum) -> DotPlan:
    """把 Δ_S 移到该实现中离 ε_k̃ 最近的正能模式上"""
    positive = np.where(spectrum.eps > 1e-9)[0]
    k = positive[np.argmin(np.abs(spectrum.eps[positive] - plan.mode_energy))]
    return detuned(plan, float(spectrum.eps[k]) - plan.setup.delta_s)


@dataclass
class SweepResult:
    """无序扫描结果"""

    seeds: List[int]
    fidelities: np.ndarray
    arrival_times: np.ndarray
    clean_fidelity: float
    spec: DisorderSpec
    plan: DotPlan
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def median(self) -> float:
        return float(np.median(self.fidelities))

    @property
    def median_drop(self) -> float:
        return self.clean_fidelity - self.median

    def rows(self) -> List[List[float]]:
        return [
            [seed, self.spec.strength, float(f), float(t)]
            for seed, f, t in zip(self.seeds, self.fidelities, self.arrival_times)
        ]

    def summary(self) -> Dict[str, Any]:
        return {
            "n_seeds": len(self.seeds),
            "clean_fidelity": self.clean_fidelity,
            "median_fidelity": self.median,
            "median_drop": self.median_drop,
            "min_fidelity": float(np.min(self.fidelities)),
            "max_fidelity": float(np.max(self.fidelities)),
            "disorder": self.spec.to_dict(),
            "plan": self.plan.to_dict(),
        }


def disorder_sweep(
    lattice: Lattice,
    setup: RegisterSetup,
    spec: DisorderSpec,
    seeds: Sequence[int],
    kappa: float = 1.0,
    ratio: Optional[float] = 0.05,
    mode: Optional[int] = None,
    samples: int = 101,
    jobs: Optional[int] = None,
    verbose: bool = True,
) -> SweepResult:
    """
    点区传输的无序扫描

    干净液滴上确定模式、耦合与 τ，之后每个种子只替换晶格谱（retune = energy 时
    再把 Δ_S 移到最近的模式）。

    Args:
        lattice: 液滴晶格
        setup: 寄存器设置
        spec: 无序设置
        seeds: 种子列表
        ratio: 耦合可分辨比
        jobs: 并行宽度

    Returns:
        SweepResult，种子顺序与输入一致
    """
    if not seeds:
        raise PreconditionError("种子列表为空")
    setup.validate(lattice)
    clean = diagonalize(assemble(lattice, ground_gauge(lattice), kappa))
    plan = dot_plan(clean, setup, mode=mode, ratio=ratio, verbose=verbose)
    clean_trace, _ = run_dot_transfer(clean, plan, method="exact", samples=samples, verbose=False)

    def run(seed: int):
        spectrum = realization(lattice, spec, seed, kappa)
        seed_plan = retuned(plan, spectrum) if spec.retune == "energy" else plan
        trace, _ = run_dot_transfer(spectrum, seed_plan, method="exact", samples=samples, verbose=False)
        arrival = arrival_time(trace, np.abs(trace.amp_r) ** 2)
        if verbose:
            print(f"[扫描] 种子 {seed}: F = {trace.fidelity:.6f}")
        return trace.fidelity, arrival

    results = parallel_map(run, list(seeds), jobs)
    result = SweepResult(
        seeds=[int(s) for s in seeds],
        fidelities=np.array([r[0] for r in results]),
        arrival_times=np.array([r[1] for r in results]),
        clean_fidelity=float(clean_trace.fidelity),
        spec=spec,
        plan=plan,
    )
    print(f"[扫描] {spec.kind}: {len(seeds)} 个种子, 干净 F = {result.clean_fidelity:.6f}, "
          f"中位数 {result.median:.6f}, 下降 {result.median_drop:.2e}")
    return result
