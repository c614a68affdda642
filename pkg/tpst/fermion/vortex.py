# coding=utf-8
"""
涡旋能隙

同种涡旋对沿最短对偶路径插入，配对能 E(s) = E_pair(s) − E_ground
按 E∞ + c·e^{−s/ξ} 外推，单涡旋能隙取 E∞/2。
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import curve_fit

from tpst.fermion.hamiltonian import assemble, vacuum_energy
from tpst.model.gauge import GaugeConfig, dual_path, insert_vortex_pair
from tpst.model.lattice import Lattice
from tpst.utils.errors import NumericalError, PreconditionError
from tpst.utils.parallel import parallel_map

SPECIES = ("triangle", "dodecagon")
MIN_SEPARATIONS = 3
FIT_TOLERANCE = 1e-3
FLAT_TOLERANCE = 1e-9


@dataclass
class VortexGapResult:
    """涡旋能隙外推结果"""

    species: str
    separations: List[int]
    pair_energies: List[float]
    gap: float
    asymptote: float
    amplitude: float = 0.0
    decay_length: float = float("inf")
    residual: float = 0.0
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "species": self.species,
            "separations": self.separations,
            "pair_energies": self.pair_energies,
            "gap": self.gap,
            "asymptote": self.asymptote,
            "amplitude": self.amplitude,
            "decay_length": self.decay_length,
            "residual": self.residual,
        }


def species_plaquette(lattice: Lattice, species: str, cell: Tuple[int, int]) -> int:
    if species not in SPECIES:
        raise PreconditionError(f"未知涡旋种类 '{species}'", suggestion=f"可选: {', '.join(SPECIES)}")
    return lattice.plaquette_at(species, cell).index


def pair_energy(
    lattice: Lattice,
    gauge: GaugeConfig,
    kappa: float,
    species: str,
    separation: int,
    origin: Tuple[int, int],
    ground_energy: Optional[float] = None,
) -> float:
    """沿周期方向间隔 separation 个元胞的同种涡旋对的激发能"""
    if ground_energy is None:
        ground_energy = vacuum_energy(assemble(lattice, gauge, kappa))
    start = species_plaquette(lattice, species, origin)
    end = species_plaquette(lattice, species, (origin[0] + separation, origin[1]))
    if start == end:
        raise PreconditionError(f"间隔 {separation} 在 L_y = {lattice.geometry.ly} 上绕回原处")
    vortex_gauge = insert_vortex_pair(gauge, dual_path(lattice, start, end))
    return vacuum_energy(assemble(lattice, vortex_gauge, kappa)) - ground_energy


def _decay_model(s, e_inf, amplitude, length):
    return e_inf + amplitude * np.exp(-s / length)


def vortex_gap(
    lattice: Lattice,
    gauge: GaugeConfig,
    kappa: float = 1.0,
    species: str = "dodecagon",
    separations: Sequence[int] = (3, 4, 5, 6, 7, 8),
    origin: Optional[Tuple[int, int]] = None,
    tolerance: float = FIT_TOLERANCE,
    jobs: Optional[int] = None,
) -> VortexGapResult:
    """
    单涡旋能隙

    Args:
        lattice: 环面或大圆柱
        gauge: 基态规范
        species: triangle / dodecagon
        separations: 至少 3 个间隔，每个 >= 3

    Raises:
        PreconditionError: 间隔数不足或间隔过小
        NumericalError: 外推残差超过容差
    """
    separations = sorted(int(s) for s in separations)
    if len(separations) < MIN_SEPARATIONS:
        raise PreconditionError(
            f"至少需要 {MIN_SEPARATIONS} 个间隔才能外推，收到 {len(separations)} 个",
            code="TOO_FEW_SEPARATIONS",
        )
    if separations[0] < 3:
        raise PreconditionError(f"间隔必须 >= 3，收到 {separations[0]}")
    if lattice.geometry.kind == "droplet":
        raise PreconditionError("涡旋能隙需要环面或圆柱几何")
    if origin is None:
        origin = (0, lattice.geometry.lx // 2)

    ground_energy = vacuum_energy(assemble(lattice, gauge, kappa))
    energies = parallel_map(
        lambda s: pair_energy(lattice, gauge, kappa, species, s, origin, ground_energy),
        separations,
        jobs,
    )
    s_arr = np.asarray(separations, dtype=float)
    e_arr = np.asarray(energies, dtype=float)

    if np.ptp(e_arr) < FLAT_TOLERANCE * max(kappa, 1.0):
        asymptote, amplitude, length, residual = float(e_arr[-1]), 0.0, float("inf"), float(np.ptp(e_arr))
    else:
        p0 = (e_arr[-1], e_arr[0] - e_arr[-1], 1.5)
        try:
            params, _ = curve_fit(_decay_model, s_arr, e_arr, p0=p0, maxfev=20000)
        except (RuntimeError, ValueError) as exc:
            raise NumericalError(f"{species} 涡旋能量外推失败: {exc}", code="EXTRAPOLATION_FAILED")
        asymptote, amplitude, length = (float(x) for x in params)
        residual = float(np.max(np.abs(_decay_model(s_arr, *params) - e_arr)))
    if residual > tolerance * max(kappa, 1.0):
        raise NumericalError(
            f"{species} 涡旋外推残差 {residual:.3e} 超过容差 {tolerance:.1e}",
            code="EXTRAPOLATION_NOT_CONVERGED",
            suggestion="增大晶格或使用更大的间隔"
        )
    result = VortexGapResult(
        species=species,
        separations=separations,
        pair_energies=[float(e) for e in e_arr],
        gap=asymptote / 2.0,
        asymptote=asymptote,
        amplitude=amplitude,
        decay_length=length,
        residual=residual,
    )
    print(f"[涡旋] {species}: Δ_v = {result.gap:.4f}κ（{len(separations)} 个间隔, 残差 {residual:.1e}）")
    return result
