# coding=utf-8
"""
自旋团簇

小团簇上的自旋哈密顿量输入：键 ½J·σ^α_s σ^β_t、纵场 h·σ^z_s，
以及每个自旋的四个 Majorana（b^x, b^y, b^z, c，编号 4s + 0..3）之间的配对。
每个键对应一个 Majorana 对 (b^α_s, b^β_t)，û = i·γ_first·γ_second。
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from tpst.model.lattice import FLAVORS, Lattice, dangling_pairs
from tpst.transfer.models import RegisterSetup
from tpst.utils.errors import PreconditionError

SPIN_CAP = 14
C_FLAVOR = 3


def majorana(spin: int, flavor: str) -> int:
    """b^α_s -> 4s + α，c_s -> 4s + 3"""
    return 4 * spin + (C_FLAVOR if flavor == "c" else FLAVORS.index(flavor))


@dataclass(frozen=True)
class Bond:
    """键 ½J·σ^{flavor_s}_s σ^{flavor_t}_t"""

    s: int
    t: int
    flavor_s: str
    flavor_t: str
    coupling: float
    kind: str = "link"                  # link / register


@dataclass(frozen=True)
class MajoranaPair:
    """配对 û = i·γ_first·γ_second"""

    first: int
    second: int
    kind: str                           # link / dangling / register / register_y
    bond: Optional[int] = None          # 对应的键编号

    @property
    def spins(self) -> Tuple[int, int]:
        return self.first // 4, self.second // 4


@dataclass
class SpinCluster:
    """自旋团簇"""

    n_spins: int
    bonds: Tuple[Bond, ...]
    pairs: Tuple[MajoranaPair, ...]
    fields: Tuple[Tuple[int, float], ...] = ()      # (自旋, h)：h·σ^z
    registers: Dict[str, int] = field(default_factory=dict)   # "L"/"R" -> 自旋编号
    lattice_spins: int = 0
    kappa: float = 1.0
    setup: Optional[RegisterSetup] = None
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        used = set()
        for pair in self.pairs:
            for m in (pair.first, pair.second):
                if m in used:
                    raise PreconditionError(f"Majorana {m} 出现在多个配对中")
                if m % 4 == C_FLAVOR:
                    raise PreconditionError(f"c Majorana {m} 不能参与配对")
                if not 0 <= m < 4 * self.n_spins:
                    raise PreconditionError(f"Majorana {m} 超出团簇范围")
                used.add(m)
        for spin, _ in self.fields:
            if majorana(spin, "z") in used:
                raise PreconditionError(f"自旋 {spin} 带纵场，其 b^z 不能参与配对")

    @property
    def n_majoranas(self) -> int:
        return 4 * self.n_spins

    @property
    def dimension(self) -> int:
        return 2 ** self.n_spins

    @property
    def matter(self) -> List[int]:
        """未配对的 Majorana（全部 c、寄存器 b^z 以及剩余的 b），升序"""
        paired = {m for p in self.pairs for m in (p.first, p.second)}
        return [m for m in range(self.n_majoranas) if m not in paired]

    def bond_pair(self, bond_index: int) -> int:
        for k, pair in enumerate(self.pairs):
            if pair.bond == bond_index:
                return k
        raise PreconditionError(f"键 {bond_index} 没有对应的配对")

    def pair_index(self, kind: str) -> List[int]:
        return [k for k, p in enumerate(self.pairs) if p.kind == kind]

    def with_couplings(self, g_l: float, g_r: float) -> "SpinCluster":
        """替换寄存器耦合强度（配对结构不变）"""
        bonds = []
        for bond in self.bonds:
            if bond.kind == "register":
                g = g_l if bond.s == self.registers.get("L") else g_r
                bond = Bond(bond.s, bond.t, bond.flavor_s, bond.flavor_t, g, "register")
            bonds.append(bond)
        return SpinCluster(
            n_spins=self.n_spins,
            bonds=tuple(bonds),
            pairs=self.pairs,
            fields=self.fields,
            registers=dict(self.registers),
            lattice_spins=self.lattice_spins,
            kappa=self.kappa,
            setup=self.setup,
            labels=list(self.labels),
        )

    def with_fields(self, fields: Sequence[Tuple[int, float]]) -> "SpinCluster":
        return SpinCluster(
            n_spins=self.n_spins,
            bonds=self.bonds,
            pairs=self.pairs,
            fields=tuple(fields),
            registers=dict(self.registers),
            lattice_spins=self.lattice_spins,
            kappa=self.kappa,
            setup=self.setup,
            labels=list(self.labels),
        )


def _check_cap(n_spins: int, cap: int) -> None:
    if n_spins > cap:
        raise PreconditionError(
            f"团簇含 {n_spins} 个自旋，超过上限 {cap}",
            code="SPIN_CAP_EXCEEDED",
            suggestion="缩小团簇或提高 oracle.spin_cap（内存随 4^N 增长）"
        )


def from_bonds(
    n_spins: int,
    bonds: Sequence[Tuple[int, int, str]],
    kappa: float = 1.0,
    extra_pairs: Sequence[Tuple[Tuple[int, str], Tuple[int, str]]] = (),
    spin_cap: int = SPIN_CAP,
) -> SpinCluster:
    """
    由 (s, t, 味) 键列表构造纯晶格团簇

    Args:
        bonds: 每个键 ½κ·σ^α_s σ^α_t
        extra_pairs: 额外的无能量配对 ((s, 味), (t, 味))
    """
    _check_cap(n_spins, spin_cap)
    bond_list = tuple(Bond(s, t, f, f, kappa) for s, t, f in bonds)
    pairs = [MajoranaPair(majorana(b.s, b.flavor_s), majorana(b.t, b.flavor_t), "link", k)
             for k, b in enumerate(bond_list)]
    for (s, fs), (t, ft) in extra_pairs:
        pairs.append(MajoranaPair(majorana(s, fs), majorana(t, ft), "dangling"))
    return SpinCluster(
        n_spins=n_spins,
        bonds=bond_list,
        pairs=tuple(pairs),
        lattice_spins=n_spins,
        kappa=kappa,
        labels=[f"s{k}" for k in range(n_spins)],
    )


def build_cluster(
    lattice: Lattice,
    kappa: float = 1.0,
    registers: Optional[RegisterSetup] = None,
    spin_cap: int = SPIN_CAP,
) -> SpinCluster:
    """
    由晶格片段构造团簇

    链路按规范箭头配对；悬挂 Majorana 沿边界环配对（注入位点保留）；
    寄存器 L、R 追加在最后，b^x 与注入位点的悬挂 Majorana 配对，
    两个寄存器的 b^y 互相配对（最后加入）。

    Raises:
        PreconditionError: 自旋数超过上限或注入位点无效
    """
    n_lattice = lattice.n_sites
    n_spins = n_lattice + (2 if registers is not None else 0)
    _check_cap(n_spins, spin_cap)

    bonds: List[Bond] = []
    pairs: List[MajoranaPair] = []
    for link in lattice.links:
        bonds.append(Bond(link.i, link.j, link.flavor, link.flavor, kappa))
        pairs.append(MajoranaPair(majorana(link.i, link.flavor), majorana(link.j, link.flavor), "link", len(bonds) - 1))

    reserved = () if registers is None else (registers.site_a, registers.site_b)
    if registers is not None:
        registers.validate(lattice)
    for pair in dangling_pairs(lattice, reserved):
        fa, fb = lattice.dangling[pair.site_a], lattice.dangling[pair.site_b]
        pairs.append(MajoranaPair(majorana(pair.site_a, fa), majorana(pair.site_b, fb), "dangling"))

    fields: List[Tuple[int, float]] = []
    reg_index: Dict[str, int] = {}
    labels = [f"{s.name}({s.cell[0]},{s.cell[1]})" for s in lattice.sites]
    if registers is not None:
        spin_l, spin_r = n_lattice, n_lattice + 1
        reg_index = {"L": spin_l, "R": spin_r}
        for spin, site, flavor, g in (
            (spin_l, registers.site_a, registers.flavor_beta, float(registers.g_l)),
            (spin_r, registers.site_b, registers.flavor_eta, float(registers.g_r)),
        ):
            bonds.append(Bond(spin, site, "x", flavor, g, "register"))
            pairs.append(MajoranaPair(majorana(spin, "x"), majorana(site, flavor), "register", len(bonds) - 1))
            fields.append((spin, -0.5 * registers.delta_s))
        pairs.append(MajoranaPair(majorana(spin_l, "y"), majorana(spin_r, "y"), "register_y"))
        labels += ["L", "R"]

    cluster = SpinCluster(
        n_spins=n_spins,
        bonds=tuple(bonds),
        pairs=tuple(pairs),
        fields=tuple(fields),
        registers=reg_index,
        lattice_spins=n_lattice,
        kappa=kappa,
        setup=registers,
        labels=labels,
    )
    print(f"[验证] 团簇: {n_spins} 个自旋, {len(bonds)} 个键, {len(pairs)} 个配对, "
          f"{len(cluster.matter)} 个物质 Majorana")
    return cluster
