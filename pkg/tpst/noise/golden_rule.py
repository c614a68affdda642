# coding=utf-8
"""
黄金规则衰减积分

入射准粒子 p 衰变为三个同向出射准粒子 p₁ + p₂ + p₃ = p（能量守恒消去 p₃），
收缩后的矩阵元 M = −λ·p³·(p₂−p₁)(p₃−p₁)(p₃−p₂) 对出射腿反对称。
Γ(p) = (1/(2π·v·p))·(1/3!)·∬|M|² dp₁dp₂，积分区域为三角形 p₁, p₂, p₃ > 0。
"""

import math
import warnings
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, nquad

from tpst.utils.errors import NumericalError, PreconditionError

EPS_REL = 1e-6
BASE_LIMIT = 50
MAX_REFINEMENTS = 3
DEFAULT_POINTS = 9


def matrix_element(lam: float, p: float, p1: float, p2: float, p3: float) -> float:
    """收缩矩阵元 M(p₁, p₂, p₃)；任意两个出射动量相等时为零"""
    return -lam * p ** 3 * (p2 - p1) * (p3 - p1) * (p3 - p2)


def _integrate(lam: float, p: float, limit: int) -> float:
    def integrand(p2: float, p1: float) -> float:
        return matrix_element(lam, p, p1, p2, p - p1 - p2) ** 2

    value, _ = nquad(
        integrand,
        [lambda p1: (0.0, p - p1), (0.0, p)],
        opts={"epsrel": EPS_REL, "epsabs": 0.0, "limit": limit},
    )
    return value


def golden_rule_rate(lam: float, velocity: float, p: float) -> float:
    """
    数值积分给出的 Γ(p)

    不收敛时把子区间上限逐级加倍，最多 MAX_REFINEMENTS 次。

    Raises:
        PreconditionError: p ≤ 0 或 v ≤ 0
        NumericalError: 最高细化级别仍不收敛
    """
    if p <= 0 or velocity <= 0:
        raise PreconditionError(f"动量与速度必须为正，收到 p = {p}, v = {velocity}")
    if lam == 0:
        return 0.0
    for level in range(MAX_REFINEMENTS + 1):
        limit = BASE_LIMIT * 2 ** level
        with warnings.catch_warnings():
            warnings.simplefilter("error", IntegrationWarning)
            try:
                integral = _integrate(lam, p, limit)
            except IntegrationWarning as e:
                if level == MAX_REFINEMENTS:
                    raise NumericalError(
                        f"黄金规则积分在细化级别 {level}（limit = {limit}）仍不收敛: {e}",
                        code="QUADRATURE_DIVERGED",
                        suggestion="缩小动量范围或放宽 EPS_REL"
                    )
                print(f"[警告] 黄金规则积分未收敛，细化到级别 {level + 1}")
                continue
        return integral / (2.0 * math.pi * velocity * p * 6.0)
    raise NumericalError("黄金规则积分失败", code="QUADRATURE_DIVERGED")


def fit_exponent(x: Sequence[float], y: Sequence[float]) -> Dict[str, float]:
    """log y = n·log x + c 的最小二乘拟合"""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) < 2 or np.any(x <= 0) or np.any(y <= 0):
        raise PreconditionError("幂律拟合需要至少两个正的数据点")
    slope, intercept = np.polyfit(np.log(x), np.log(y), 1)
    return {"exponent": float(slope), "prefactor": float(np.exp(intercept))}


@dataclass
class GoldenRuleResult:
    """Γ(p) 数值表与幂律拟合"""

    momenta: np.ndarray
    rates: np.ndarray
    exponent: float
    prefactor: float
    interaction: float
    velocity: float

    def rows(self) -> List[List[float]]:
        return [[float(p), 0.0, float(g)] for p, g in zip(self.momenta, self.rates)]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "exponent": self.exponent,
            "prefactor": self.prefactor,
            "interaction": self.interaction,
            "velocity": self.velocity,
            "p_min": float(self.momenta[0]),
            "p_max": float(self.momenta[-1]),
            "label": "scaling estimate",
        }


def golden_rule_numeric(
    lam: float,
    velocity: float,
    p: float,
    decade: float = 10.0,
    points: int = DEFAULT_POINTS,
    momenta: Optional[Sequence[float]] = None,
) -> GoldenRuleResult:
    """
    在 [p, decade·p] 上数值计算 Γ 并拟合指数

    Args:
        lam: 相互作用强度 λ
        velocity: 边缘速度 v
        p: 动量区间下端
        momenta: 直接给出动量网格时忽略 decade/points
    """
    if momenta is None:
        if p <= 0:
            raise PreconditionError(f"动量必须为正，收到 {p}")
        momenta = np.geomspace(p, decade * p, points)
    momenta = np.asarray(momenta, dtype=float)
    rates = np.array([golden_rule_rate(lam, velocity, float(q)) for q in momenta])
    if lam == 0:
        fit = {"exponent": float("nan"), "prefactor": 0.0}
    else:
        fit = fit_exponent(momenta, rates)
    print(f"[噪声] 黄金规则: {len(momenta)} 个动量点, 拟合指数 {fit['exponent']:.3f}")
    return GoldenRuleResult(
        momenta=momenta,
        rates=rates,
        exponent=fit["exponent"],
        prefactor=fit["prefactor"],
        interaction=float(lam),
        velocity=float(velocity),
    )
