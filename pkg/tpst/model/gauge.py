# coding=utf-8
"""
Z2 规范场

GaugeConfig 在每条链路的规范方向上存一个 ±1 符号，另一方向由反对称给出；
配对链路（悬挂位点对）和寄存器链路作为额外链路存储。
格子通量 w(p) 是边界链路规范符号之积，基态扇区处处为 +1。
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import shortest_path

from tpst.model.lattice import Lattice, Plaquette, SERIAL_VERSION
from tpst.utils.errors import InvalidPathError, PreconditionError


@dataclass(frozen=True)
class GaugeConfig:
    """
    不可变规范配置

    signs[l] 是链路 l 沿其规范方向 (i -> j) 的 U 值；
    extra 保存额外链路 (a, b) -> U_ab（a -> b 为其规范方向）。
    """

    lattice: Lattice = field(repr=False, compare=False)
    signs: Tuple[int, ...]
    extra: Tuple[Tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if len(self.signs) != self.lattice.n_links:
            raise PreconditionError(
                f"规范配置链路数 {len(self.signs)} 与晶格链路数 {self.lattice.n_links} 不一致"
            )
        if any(s not in (1, -1) for s in self.signs):
            raise PreconditionError("规范符号只能取 ±1")

    # === 访问 ===

    def sign(self, i: int, j: int) -> int:
        """有向链路 i -> j 上的 U_ij（反对称）"""
        for a, b, s in self.extra:
            if (a, b) == (i, j):
                return s
            if (a, b) == (j, i):
                return -s
        link = self.lattice.links[self.lattice.link_between(i, j)]
        s = self.signs[link.index]
        return s if (link.i, link.j) == (i, j) else -s

    def as_array(self) -> np.ndarray:
        return np.asarray(self.signs, dtype=float)

    def extra_sign(self, a: int, b: int) -> Optional[int]:
        for x, y, s in self.extra:
            if (x, y) == (a, b):
                return s
            if (x, y) == (b, a):
                return -s
        return None

    # === 变换 ===

    def flip_links(self, link_ids: Iterable[int]) -> "GaugeConfig":
        signs = list(self.signs)
        for l in link_ids:
            signs[l] = -signs[l]
        return GaugeConfig(self.lattice, tuple(signs), self.extra)

    def with_extra(self, a: int, b: int, sign: int = 1) -> "GaugeConfig":
        """增加（或替换）一条额外链路 a -> b"""
        kept = tuple(e for e in self.extra if {e[0], e[1]} != {a, b})
        return GaugeConfig(self.lattice, self.signs, kept + ((a, b, int(sign)),))

    def with_pairs(self, pairs) -> "GaugeConfig":
        """为悬挂位点对添加配对链路（U = +1）"""
        gauge = self
        for pair in pairs:
            gauge = gauge.with_extra(pair.site_a, pair.site_b, 1)
        return gauge

    # === 序列化 ===

    def to_dict(self) -> Dict[str, Any]:
        """相对 ground_gauge 的增量表示"""
        return {
            "version": SERIAL_VERSION,
            "deltas": [[l, s] for l, s in enumerate(self.signs) if s != 1],
            "extra": [list(e) for e in self.extra],
        }

    @classmethod
    def from_dict(cls, lattice: Lattice, data: Dict[str, Any]) -> "GaugeConfig":
        signs = [1] * lattice.n_links
        for link_id, sign in data.get("deltas", []):
            if not 0 <= int(link_id) < lattice.n_links:
                raise PreconditionError(f"链路编号 {link_id} 超出范围")
            signs[int(link_id)] = int(sign)
        extra = tuple((int(a), int(b), int(s)) for a, b, s in data.get("extra", []))
        return cls(lattice, tuple(signs), extra)


@dataclass(frozen=True)
class FluxPattern:
    """格子通量 w(p)，按 lattice.plaquettes 顺序"""

    w: Tuple[int, ...]
    kinds: Tuple[str, ...] = field(default=(), compare=False)

    def vortices(self, kind: Optional[str] = None) -> List[int]:
        """w = -1 的格子编号"""
        return [
            p for p, value in enumerate(self.w)
            if value == -1 and (kind is None or self.kinds[p] == kind)
        ]

    @property
    def vortex_count(self) -> int:
        return sum(1 for value in self.w if value == -1)

    def to_dict(self) -> Dict[str, Any]:
        return {"w": list(self.w), "vortices": self.vortices()}


def ground_gauge(lattice: Lattice) -> GaugeConfig:
    """基态规范：所有链路沿规范箭头 U = +1，悬挂配对链路同样为 +1"""
    gauge = GaugeConfig(lattice, tuple([1] * lattice.n_links))
    pairs = [p.pair for p in lattice.plaquettes if p.kind == "dangling"]
    for a, b in pairs:
        gauge = gauge.with_extra(a, b, 1)
    return gauge


def _plaquette_flux(gauge: GaugeConfig, plaquette: Plaquette) -> int:
    value = 1
    for l in plaquette.links:
        value *= gauge.signs[l]
    if plaquette.pair is not None:
        pair_sign = gauge.extra_sign(*plaquette.pair)
        value *= 1 if pair_sign is None else pair_sign
    return value


def flux_pattern(gauge: GaugeConfig) -> FluxPattern:
    """逐格子计算通量"""
    plaquettes = gauge.lattice.plaquettes
    return FluxPattern(
        w=tuple(_plaquette_flux(gauge, p) for p in plaquettes),
        kinds=tuple(p.kind for p in plaquettes),
    )


def gauge_transform(gauge: GaugeConfig, sites: Iterable[int]) -> GaugeConfig:
    """位点规范变换 D_i：翻转与位点相连的全部链路（含额外链路）"""
    lattice = gauge.lattice
    signs = list(gauge.signs)
    extra = list(gauge.extra)
    for site in sites:
        for link in lattice.links:
            if link.i == site or link.j == site:
                signs[link.index] = -signs[link.index]
        extra = [(a, b, -s if site in (a, b) else s) for a, b, s in extra]
    return GaugeConfig(lattice, tuple(signs), tuple(extra))


def reverse_triangle_fluxes(gauge: GaugeConfig) -> GaugeConfig:
    """
    翻转全部三角通量（手征反转）

    每个三角形翻转其 z 型内部链路；每个十二边形恰好包含两条这样的链路，通量不变。
    """
    lattice = gauge.lattice
    return gauge.flip_links(l.index for l in lattice.links if l.link_type == "z")


# === 对偶路径 ===


def _link_plaquettes(lattice: Lattice) -> Dict[int, List[int]]:
    owners: Dict[int, List[int]] = {}
    for p in lattice.plaquettes:
        if p.kind == "dangling":
            continue
        for l in p.links:
            owners.setdefault(l, []).append(p.index)
    return owners


@dataclass(frozen=True)
class DualPath:
    """对偶晶格路径：links[k] 分隔 plaquettes[k] 与 plaquettes[k+1]"""

    plaquettes: Tuple[int, ...]
    links: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.links)


def dual_path(lattice: Lattice, start: int, end: int) -> DualPath:
    """
    两个格子之间的最短对偶路径

    Args:
        lattice: 晶格
        start: 起点格子编号
        end: 终点格子编号

    Returns:
        DualPath（确定性：同一输入得到同一路径）
    """
    owners = _link_plaquettes(lattice)
    n = len(lattice.plaquettes)
    rows, cols, via = [], [], {}
    for link, plist in sorted(owners.items()):
        if len(plist) != 2:
            continue
        p, q = plist
        for u, w in ((p, q), (q, p)):
            if (u, w) not in via:
                via[(u, w)] = link
                rows.append(u)
                cols.append(w)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n)).tocsr()
    _, predecessors = shortest_path(graph, unweighted=True, indices=start, return_predecessors=True)
    if start != end and predecessors[end] < 0:
        raise InvalidPathError(f"格子 {start} 与 {end} 在对偶图上不连通")
    chain = [end]
    while chain[-1] != start:
        chain.append(int(predecessors[chain[-1]]))
    chain.reverse()
    links = tuple(via[(chain[k], chain[k + 1])] for k in range(len(chain) - 1))
    return DualPath(tuple(chain), links)


def _validate_path(lattice: Lattice, path: DualPath) -> None:
    if len(path.plaquettes) != len(path.links) + 1:
        raise InvalidPathError("路径格子数必须比链路数多一")
    owners = _link_plaquettes(lattice)
    for k, link in enumerate(path.links):
        here, there = path.plaquettes[k], path.plaquettes[k + 1]
        plist = owners.get(link, [])
        if here not in plist or there not in plist or here == there:
            raise InvalidPathError(f"第 {k} 步: 链路 {link} 不分隔格子 {here} 与 {there}")


def insert_vortex_pair(gauge: GaugeConfig, path) -> GaugeConfig:
    """
    沿对偶路径插入一对涡旋

    翻转路径上的每条链路：只有两端格子的通量被翻转，中间格子翻转两次保持不变。

    Args:
        gauge: 规范配置
        path: DualPath，或格子编号序列（相邻格子需共享链路）

    Raises:
        InvalidPathError: 相邻两步不共享链路
    """
    lattice = gauge.lattice
    if not isinstance(path, DualPath):
        plaquettes = tuple(int(p) for p in path)
        owners = _link_plaquettes(lattice)
        links = []
        for k in range(len(plaquettes) - 1):
            shared = sorted(
                l for l in lattice.plaquettes[plaquettes[k]].links
                if plaquettes[k + 1] in owners.get(l, [])
            )
            if not shared or plaquettes[k] == plaquettes[k + 1]:
                raise InvalidPathError(f"格子 {plaquettes[k]} 与 {plaquettes[k + 1]} 不相邻")
            links.append(shared[0])
        path = DualPath(plaquettes, tuple(links))
    _validate_path(lattice, path)
    return gauge.flip_links(path.links)


def is_translation_invariant(gauge: GaugeConfig, axes: Sequence[int] = (0,)) -> bool:
    """规范符号是否在给定元胞方向上平移不变"""
    lattice = gauge.lattice
    classes: Dict[Tuple, int] = {}
    for link in lattice.links:
        src = lattice.sites[link.i]
        key = [lattice.sites[link.i].sublattice, lattice.sites[link.j].sublattice, link.link_type]
        for axis in (0, 1):
            if axis not in axes:
                key.append(src.cell[axis])
        key = tuple(key)
        sign = gauge.signs[link.index]
        if classes.setdefault(key, sign) != sign:
            return False
    return True
