# coding=utf-8
"""
退相干速率估计

全部公式取单位前因子，只用于标度估计（输出标注 scaling estimate）。
温度单位 κ（k_B = 1）。
"""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from tpst.noise.golden_rule import fit_exponent
from tpst.utils.errors import PreconditionError

BATHS = ("thermal", "lorentzian")
SCALING_LABEL = "scaling estimate"


@dataclass(frozen=True)
class NoiseModel:
    """噪声参数"""

    temperature: float = 0.0            # T
    vortex_gap: float = 0.14            # Δ_v（单涡旋）
    n_plaquettes: int = 1000            # 体格子数 n_p
    perimeter: float = 100.0            # 液滴周长 ℓ（单位 a）
    interaction: float = 1.0            # λ（单位 κ·a⁷）
    kappa_prime: Optional[float] = None # 微观 κ′
    correlation_time: float = 10.0      # 浴关联时间 t_c
    localization_length: float = 1.0    # ξ
    velocity: float = 1.0               # 边缘速度 v
    delta_s: float = 1.0                # 寄存器劈裂（微观形式）
    bath: str = "thermal"

    def __post_init__(self):
        if self.temperature < 0:
            raise PreconditionError(f"温度必须非负，收到 {self.temperature}")
        if self.bath not in BATHS:
            raise PreconditionError(f"未知热浴 '{self.bath}'", suggestion=f"可选: {', '.join(BATHS)}")
        if self.localization_length <= 0 or self.velocity <= 0:
            raise PreconditionError("局域长度与边缘速度必须为正")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _boltzmann(energy: float, temperature: float) -> float:
    if temperature <= 0:
        return 0.0
    return math.exp(-energy / temperature)


def vortex_density(model: NoiseModel, temperature: Optional[float] = None) -> float:
    """体涡旋期望数 N_v = n_p·e^{−Δ_v/T}"""
    t = model.temperature if temperature is None else temperature
    if t < 0:
        raise PreconditionError(f"温度必须非负，收到 {t}")
    return model.n_plaquettes * _boltzmann(model.vortex_gap, t)


def decay_interaction(model: NoiseModel, p: float, temperature: Optional[float] = None) -> float:
    """
    相互作用导致的边缘准粒子衰减率

    Γ = λ²p¹³/v + λ²p¹¹T²/v；给出 κ′ 时用微观形式 Γ = (κ²/Δ_S)(κ′/κ)⁴(ap)¹⁴（κ = a = 1）。
    """
    if p <= 0:
        raise PreconditionError(f"动量必须为正，收到 {p}")
    t = model.temperature if temperature is None else temperature
    v = model.velocity
    if t > 0 and v * p <= t:
        print(f"[警告] v·p = {v * p:.3g} 不满足 v·p ≫ T = {t:.3g}，低温展开失效")
    if model.kappa_prime is not None:
        return (1.0 / model.delta_s) * model.kappa_prime ** 4 * p ** 14
    lam2 = model.interaction ** 2
    return lam2 * p ** 13 / v + lam2 * p ** 11 * t ** 2 / v


def bath_spectrum(model: NoiseModel, omega: float, temperature: Optional[float] = None) -> float:
    """噪声谱 S(ω)：thermal 为 e^{−ω/T}，lorentzian 为 1/(ω² + t_c⁻²)"""
    t = model.temperature if temperature is None else temperature
    if model.bath == "lorentzian":
        return 1.0 / (omega ** 2 + model.correlation_time ** -2)
    return _boltzmann(omega, t)


def decay_edge_noise(
    model: NoiseModel,
    delta_s: float,
    temperature: Optional[float] = None,
    perimeter: Optional[float] = None,
) -> float:
    """
    边缘噪声导致的传输衰减率

    Γ = S(Δ_S) + ℓ·S(Δ_v)（thermal: e^{−Δ_S/T} + ℓ·e^{−Δ_v/T}）
    """
    t = model.temperature if temperature is None else temperature
    if model.bath == "thermal" and t <= 0:
        return 0.0
    length = model.perimeter if perimeter is None else perimeter
    return bath_spectrum(model, delta_s, t) + length * bath_spectrum(model, model.vortex_gap, t)


def bulk_suppression(model: NoiseModel, distance: float, temperature: Optional[float] = None) -> float:
    """体噪声压制因子 e^{−d/ξ}·e^{−ω₀/T}，ω₀ = 2Δ_v"""
    if distance < 0:
        raise PreconditionError(f"距离必须非负，收到 {distance}")
    t = model.temperature if temperature is None else temperature
    spatial = math.exp(-distance / model.localization_length)
    if math.isinf(t):
        return spatial
    return spatial * _boltzmann(2.0 * model.vortex_gap, t)


def rate_table(model: NoiseModel, momenta, temperatures) -> list:
    """CSV 行 (p, T, gamma)：相互作用衰减率"""
    return [[float(p), float(t), decay_interaction(model, p, t)] for t in temperatures for p in momenta]


def thermal_correction_exponent(model: NoiseModel, p: float, temperatures) -> float:
    """Γ(T) − Γ(0) 对 T 的对数斜率（低温展开给出 2）"""
    zero = decay_interaction(model, p, 0.0)
    corrections = [decay_interaction(model, p, t) - zero for t in temperatures]
    return fit_exponent(temperatures, corrections)["exponent"]
