# coding=utf-8
"""
三角装饰蜂窝晶格

构造环面、圆柱和开放液滴几何下的晶格：带类型的链路、逆时针定向的
三角形与十二边形格子、边界悬挂位点及其自由 Majorana 味。

约定:
- 元胞 R = i·a1 + j·a2，i 为周期（y）方向 0..L_y-1，j 为行号 0..L_x-1
- 子格顺序 0..5 = A_x, A_y, A_z, B_x, B_y, B_z
- 链路存一个规范方向（基态箭头），shift 为终点相对起点的元胞位移（不取模）
"""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from tpst.utils.errors import ConfigError, PreconditionError

FLAVORS = ("x", "y", "z")
SUBLATTICES = ("A_x", "A_y", "A_z", "B_x", "B_y", "B_z")
LINK_TYPES = ("x", "y", "z", "x'", "y'", "z'")
GEOMETRY_KINDS = ("torus", "cylinder", "droplet")
SUPPORTED_BOUNDARIES = ("zigzag",)
SERIAL_VERSION = 1

# 三角形边长尺度 ℓ（|a1| = a = 1）与角点偏移
ELL = 1.0 / math.sqrt(3.0)
CORNER = ELL / 3.0
A1 = (ELL * math.sqrt(3.0) / 2.0, ELL * 1.5)
A2 = (-ELL * math.sqrt(3.0) / 2.0, ELL * 1.5)
CORNER_DIRS = {
    "x": (math.sqrt(3.0) / 2.0, 0.5),
    "y": (-math.sqrt(3.0) / 2.0, 0.5),
    "z": (0.0, -1.0),
}
# 行间距（垂直于 a1 方向）
ROW_SPACING = math.sqrt(3.0) / 2.0

# 三角内部链路: (起点味, 终点味) -> 类型（对角味）
_INTRA = (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y"))
# 三角间链路: 味 -> 元胞位移
_INTER_SHIFT = {"z": (0, 0), "x": (1, 0), "y": (0, 1)}

# 十二边形：(元胞偏移, 子格, 到下一位点的链路类型)
_DODECAGON = (
    ((0, 0), "A_y", "z"),
    ((0, 0), "A_x", "x'"),
    ((1, 0), "B_x", "y"),
    ((1, 0), "B_z", "z'"),
    ((1, 0), "A_z", "x"),
    ((1, 0), "A_y", "y'"),
    ((1, 1), "B_y", "z"),
    ((1, 1), "B_x", "x'"),
    ((0, 1), "A_x", "y"),
    ((0, 1), "A_z", "z'"),
    ((0, 1), "B_z", "x"),
    ((0, 1), "B_y", "y'"),
)


def sublattice_index(name: str) -> int:
    return SUBLATTICES.index(name)


@dataclass(frozen=True)
class Geometry:
    """几何描述：类型、尺寸 (L_y, L_x) 与边界终止方式"""

    kind: str
    ly: int
    lx: int
    boundary: str = "zigzag"

    def __post_init__(self):
        if self.kind not in GEOMETRY_KINDS:
            raise ConfigError(f"未知几何类型 '{self.kind}'", suggestion=f"可选: {', '.join(GEOMETRY_KINDS)}")
        if int(self.ly) < 1 or int(self.lx) < 1:
            raise ConfigError(f"晶格尺寸必须 >= 1，收到 L_y={self.ly}, L_x={self.lx}")
        if self.boundary not in SUPPORTED_BOUNDARIES:
            raise ConfigError(
                f"不支持的边界终止方式 '{self.boundary}'",
                suggestion=f"可选: {', '.join(SUPPORTED_BOUNDARIES)}"
            )

    @property
    def periodic_y(self) -> bool:
        return self.kind in ("torus", "cylinder")

    @property
    def periodic_x(self) -> bool:
        return self.kind == "torus"

    @property
    def n_cells(self) -> int:
        return self.ly * self.lx

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "ly": self.ly, "lx": self.lx, "boundary": self.boundary}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Geometry":
        return cls(
            kind=data.get("kind", "torus"),
            ly=int(data.get("ly", 1)),
            lx=int(data.get("lx", 1)),
            boundary=data.get("boundary", "zigzag"),
        )


@dataclass(frozen=True)
class Site:
    """晶格位点"""

    index: int
    cell: Tuple[int, int]               # (i, j)
    sublattice: int                     # 0..5
    position: Tuple[float, float]

    @property
    def name(self) -> str:
        return SUBLATTICES[self.sublattice]

    @property
    def flavor(self) -> str:
        return FLAVORS[self.sublattice % 3]

    @property
    def row(self) -> int:
        return self.cell[1]


@dataclass(frozen=True)
class Link:
    """规范方向链路 i -> j"""

    index: int
    i: int
    j: int
    link_type: str
    shift: Tuple[int, int]              # 终点元胞 - 起点元胞（不取模）

    @property
    def flavor(self) -> str:
        return self.link_type[0]

    @property
    def primed(self) -> bool:
        return self.link_type.endswith("'")


@dataclass(frozen=True)
class Plaquette:
    """定向格子（逆时针位点环 + 边界链路）"""

    index: int
    kind: str                           # triangle / dodecagon / dangling
    cell: Tuple[int, int]
    sites: Tuple[int, ...]
    links: Tuple[int, ...]
    pair: Optional[Tuple[int, int]] = None   # dangling 格子的配对位点


@dataclass(frozen=True)
class DanglingPair:
    """一对悬挂位点，以及沿边界连接它们的位点链"""

    site_a: int
    site_b: int
    chain: Tuple[int, ...]
    chain_links: Tuple[int, ...]


@dataclass(frozen=True)
class Lattice:
    """不可变晶格"""

    geometry: Geometry
    sites: Tuple[Site, ...]
    links: Tuple[Link, ...]
    plaquettes: Tuple[Plaquette, ...]
    dangling: Dict[int, str] = field(default_factory=dict)          # 位点 -> 自由味
    boundary_arcs: Tuple[Tuple[int, ...], ...] = ()                  # 部分十二边形上的现存位点弧
    _lookup: Dict[Tuple[int, int, int], int] = field(default_factory=dict, repr=False, compare=False)
    _link_lookup: Dict[Tuple[int, int, str], int] = field(default_factory=dict, repr=False, compare=False)

    # === 查询 ===

    @property
    def n_sites(self) -> int:
        return len(self.sites)

    @property
    def n_links(self) -> int:
        return len(self.links)

    def site_index(self, i: int, j: int, sublattice) -> int:
        """按 (元胞, 子格) 查位点编号，周期方向自动取模"""
        if isinstance(sublattice, str):
            sublattice = sublattice_index(sublattice)
        key = self._wrap(i, j) + (sublattice,)
        if key[0] is None or key[1] is None or key not in self._lookup:
            raise PreconditionError(f"元胞 ({i}, {j}) 不在晶格内")
        return self._lookup[key]

    def has_cell(self, i: int, j: int) -> bool:
        wi, wj = self._wrap(i, j)
        return wi is not None and wj is not None

    def _wrap(self, i: int, j: int) -> Tuple[Optional[int], Optional[int]]:
        g = self.geometry
        if g.periodic_y:
            i = i % g.ly
        elif not 0 <= i < g.ly:
            i = None
        if g.periodic_x:
            j = j % g.lx
        elif not 0 <= j < g.lx:
            j = None
        return i, j

    def link_between(self, a: int, b: int, link_type: Optional[str] = None) -> int:
        """两位点之间的链路编号"""
        lo, hi = min(a, b), max(a, b)
        if link_type is not None:
            key = (lo, hi, link_type)
            if key in self._link_lookup:
                return self._link_lookup[key]
        else:
            for t in LINK_TYPES:
                if (lo, hi, t) in self._link_lookup:
                    return self._link_lookup[(lo, hi, t)]
        raise PreconditionError(f"位点 {a} 与 {b} 之间没有链路")

    def links_of(self, site: int) -> List[int]:
        return [l.index for l in self.links if l.i == site or l.j == site]

    def coordination(self) -> List[int]:
        count = [0] * self.n_sites
        for link in self.links:
            count[link.i] += 1
            count[link.j] += 1
        return count

    def plaquettes_of_kind(self, kind: str) -> List[Plaquette]:
        return [p for p in self.plaquettes if p.kind == kind]

    def plaquette_at(self, kind: str, cell: Tuple[int, int], sublattice: str = "A") -> Plaquette:
        """按元胞定位三角形（A/B）或十二边形"""
        wi, wj = self._wrap(*cell)
        for p in self.plaquettes:
            if p.kind != kind or p.cell != (wi, wj):
                continue
            if kind == "triangle" and SUBLATTICES[self.sites[p.sites[0]].sublattice][0] != sublattice:
                continue
            return p
        raise PreconditionError(f"元胞 {cell} 处没有 {kind} 格子")

    def plaquette_center(self, plaquette: Plaquette) -> Tuple[float, float]:
        xs = [self.sites[s].position[0] for s in plaquette.sites]
        ys = [self.sites[s].position[1] for s in plaquette.sites]
        return sum(xs) / len(xs), sum(ys) / len(ys)

    def boundary_sites(self) -> List[int]:
        """位于部分十二边形弧上的全部位点（开放边界的外圈）"""
        seen = set()
        for arc in self.boundary_arcs:
            seen.update(arc)
        return sorted(seen)

    # === 序列化 ===

    def to_dict(self) -> Dict[str, Any]:
        """版本化 JSON 文档（调试与跨语言夹具）"""
        return {
            "version": SERIAL_VERSION,
            "geometry": self.geometry.to_dict(),
            "sites": [[s.cell[0], s.cell[1], s.sublattice, s.position[0], s.position[1]] for s in self.sites],
            "links": [[l.i, l.j, l.link_type, l.shift[0], l.shift[1]] for l in self.links],
            "plaquettes": [
                {"kind": p.kind, "cell": list(p.cell), "sites": list(p.sites), "links": list(p.links)}
                for p in self.plaquettes
            ],
            "dangling": {str(k): v for k, v in sorted(self.dangling.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


# === 构造 ===


def _position(i: int, j: int, sub: int) -> Tuple[float, float]:
    cx = i * A1[0] + j * A2[0]
    cy = i * A1[1] + j * A2[1]
    flavor = FLAVORS[sub % 3]
    dx, dy = CORNER_DIRS[flavor]
    if sub < 3:
        return cx + CORNER * dx, cy + CORNER * dy
    # B 三角中心 = A 中心 + ℓ e_z，角点朝 -e_α
    return cx - CORNER * dx, cy - ELL - CORNER * dy


def build_lattice(geometry: Geometry) -> Lattice:
    """
    构造晶格

    Args:
        geometry: 几何描述

    Returns:
        满足全部类型不变量的 Lattice；格子按逆时针定向
    """
    g = geometry
    sites: List[Site] = []
    lookup: Dict[Tuple[int, int, int], int] = {}
    for j in range(g.lx):
        for i in range(g.ly):
            for sub in range(6):
                idx = len(sites)
                sites.append(Site(index=idx, cell=(i, j), sublattice=sub, position=_position(i, j, sub)))
                lookup[(i, j, sub)] = idx

    def wrap(i: int, j: int) -> Tuple[Optional[int], Optional[int]]:
        if g.periodic_y:
            i %= g.ly
        elif not 0 <= i < g.ly:
            return None, None
        if g.periodic_x:
            j %= g.lx
        elif not 0 <= j < g.lx:
            return None, None
        return i, j

    links: List[Link] = []
    link_lookup: Dict[Tuple[int, int, str], int] = {}

    def add_link(a: int, b: int, link_type: str, shift: Tuple[int, int]) -> None:
        idx = len(links)
        links.append(Link(index=idx, i=a, j=b, link_type=link_type, shift=shift))
        link_lookup[(min(a, b), max(a, b), link_type)] = idx

    for j in range(g.lx):
        for i in range(g.ly):
            # 三角内部：x->y->z->x，两种三角都是逆时针
            for offset in (0, 3):
                for start, end, link_type in _INTRA:
                    a = lookup[(i, j, offset + FLAVORS.index(start))]
                    b = lookup[(i, j, offset + FLAVORS.index(end))]
                    add_link(a, b, link_type, (0, 0))
            # 三角之间：A_α(R) -> B_α(R + d_α)
            for flavor in FLAVORS:
                di, dj = _INTER_SHIFT[flavor]
                ti, tj = wrap(i + di, j + dj)
                if ti is None:
                    continue
                a = lookup[(i, j, FLAVORS.index(flavor))]
                b = lookup[(ti, tj, 3 + FLAVORS.index(flavor))]
                add_link(a, b, flavor + "'", (di, dj))

    plaquettes: List[Plaquette] = []
    for j in range(g.lx):
        for i in range(g.ly):
            for offset in (0, 3):
                tri_sites = tuple(lookup[(i, j, offset + s)] for s in range(3))
                tri_links = tuple(
                    link_lookup[(min(tri_sites[k], tri_sites[(k + 1) % 3]),
                                 max(tri_sites[k], tri_sites[(k + 1) % 3]),
                                 FLAVORS[(k + 2) % 3])]
                    for k in range(3)
                )
                plaquettes.append(Plaquette(len(plaquettes), "triangle", (i, j), tri_sites, tri_links))

    # 十二边形：锚定元胞在开放方向向外扩一格，收集完整格子与边界弧
    i_range = range(g.ly) if g.periodic_y else range(-1, g.ly)
    j_range = range(g.lx) if g.periodic_x else range(-1, g.lx)
    arcs: List[Tuple[int, ...]] = []
    for j in j_range:
        for i in i_range:
            cycle: List[Optional[int]] = []
            for (di, dj), sub, _ in _DODECAGON:
                ci, cj = wrap(i + di, j + dj)
                cycle.append(None if ci is None else lookup[(ci, cj, sublattice_index(sub))])
            present = [s is not None for s in cycle]
            if all(present):
                d_links = []
                for k, (_, _, link_type) in enumerate(_DODECAGON):
                    a, b = cycle[k], cycle[(k + 1) % 12]
                    d_links.append(link_lookup[(min(a, b), max(a, b), link_type)])
                anchor = wrap(i, j)
                plaquettes.append(Plaquette(len(plaquettes), "dodecagon", anchor, tuple(cycle), tuple(d_links)))
            elif any(present):
                arcs.extend(_present_arcs(cycle))

    counts = [0] * len(sites)
    types_at: List[set] = [set() for _ in sites]
    for link in links:
        for s in (link.i, link.j):
            counts[s] += 1
            types_at[s].add(link.flavor)
    dangling: Dict[int, str] = {}
    for s, n in enumerate(counts):
        if n == 2:
            missing = [f for f in FLAVORS if f not in types_at[s]]
            dangling[s] = missing[0]

    lattice = Lattice(
        geometry=g,
        sites=tuple(sites),
        links=tuple(links),
        plaquettes=tuple(plaquettes),
        dangling=dangling,
        boundary_arcs=tuple(arcs),
        _lookup=lookup,
        _link_lookup=link_lookup,
    )

    if dangling:
        pairs = dangling_pairs(lattice)
        extra = tuple(
            Plaquette(len(plaquettes) + k, "dangling", lattice.sites[p.site_a].cell,
                      p.chain, p.chain_links, pair=(p.site_a, p.site_b))
            for k, p in enumerate(pairs)
        )
        lattice = Lattice(
            geometry=g,
            sites=lattice.sites,
            links=lattice.links,
            plaquettes=lattice.plaquettes + extra,
            dangling=dangling,
            boundary_arcs=lattice.boundary_arcs,
            _lookup=lookup,
            _link_lookup=link_lookup,
        )
    print(f"[晶格] {g.kind} {g.ly}x{g.lx}: {len(sites)} 位点, {len(links)} 链路, "
          f"{len(plaquettes)} 格子, {len(dangling)} 悬挂位点")
    return lattice


def _present_arcs(cycle: Sequence[Optional[int]]) -> List[Tuple[int, ...]]:
    """部分十二边形中按逆时针顺序的连续现存位点段"""
    n = len(cycle)
    start = next(k for k in range(n) if cycle[k] is None)
    arcs: List[Tuple[int, ...]] = []
    current: List[int] = []
    for step in range(1, n + 1):
        s = cycle[(start + step) % n]
        if s is None:
            if current:
                arcs.append(tuple(current))
                current = []
        else:
            current.append(s)
    if current:
        arcs.append(tuple(current))
    return arcs


def boundary_cycles(lattice: Lattice) -> List[List[int]]:
    """
    悬挂位点的定向边界环

    每条边界弧从一个悬挂位点走到下一个；沿弧串联得到一个或多个闭环
    （液滴一个，圆柱上下各一个）。
    """
    successor: Dict[int, Tuple[int, Tuple[int, ...]]] = {}
    for arc in lattice.boundary_arcs:
        if arc[0] in lattice.dangling and arc[-1] in lattice.dangling and len(arc) > 1:
            successor[arc[0]] = (arc[-1], arc)
    cycles: List[List[int]] = []
    visited = set()
    for start in sorted(successor):
        if start in visited:
            continue
        cycle = []
        s = start
        while s not in visited and s in successor:
            visited.add(s)
            cycle.append(s)
            s = successor[s][0]
        if cycle:
            cycles.append(cycle)
    return cycles


def _arc_links(lattice: Lattice, arc: Tuple[int, ...]) -> List[int]:
    return [lattice.link_between(arc[k], arc[k + 1]) for k in range(len(arc) - 1)]


def dangling_pairs(lattice: Lattice, reserved: Iterable[int] = ()) -> List[DanglingPair]:
    """
    悬挂位点配对

    沿定向边界环去掉保留位点（注入点）后，相邻位点两两配对；每对记录
    连接它们的边界位点链，用于定义配对链路上的规范变量。

    Args:
        lattice: 晶格
        reserved: 保留位点（不参与配对）

    Returns:
        DanglingPair 列表；环面返回空列表
    """
    reserved = set(reserved)
    for s in reserved:
        if s not in lattice.dangling:
            raise PreconditionError(f"保留位点 {s} 不是悬挂位点")
    arc_from: Dict[int, Tuple[int, ...]] = {}
    for arc in lattice.boundary_arcs:
        if arc[0] in lattice.dangling and len(arc) > 1:
            arc_from[arc[0]] = arc

    pairs: List[DanglingPair] = []
    for cycle in boundary_cycles(lattice):
        kept = [s for s in cycle if s not in reserved]
        position = {s: k for k, s in enumerate(cycle)}
        for k in range(0, len(kept) - 1, 2):
            a, b = kept[k], kept[k + 1]
            chain: List[int] = [a]
            chain_links: List[int] = []
            s = a
            steps = 0
            while s != b:
                arc = arc_from[s]
                chain.extend(arc[1:])
                chain_links.extend(_arc_links(lattice, arc))
                s = arc[-1]
                steps += 1
                if steps > len(cycle):
                    raise PreconditionError(f"边界环在位点 {a} 处断开（位置 {position[a]}）")
            pairs.append(DanglingPair(a, b, tuple(chain), tuple(chain_links)))
    return pairs
