# coding=utf-8
"""
噪声与退相干模块

标度速率估计、黄金规则衰减积分与静态无序扫描。
"""

from tpst.noise.rates import (
    BATHS,
    SCALING_LABEL,
    NoiseModel,
    bath_spectrum,
    bulk_suppression,
    decay_edge_noise,
    decay_interaction,
    rate_table,
    thermal_correction_exponent,
    vortex_density,
)
from tpst.noise.golden_rule import GoldenRuleResult, fit_exponent, golden_rule_numeric, golden_rule_rate, matrix_element
from tpst.noise.disorder import (
    DISORDER_KINDS,
    SWEEP_HEADER,
    DisorderSpec,
    SweepResult,
    disorder_sweep,
    disordered_gauge,
    link_jitter,
    realization,
)

__all__ = [
    "BATHS",
    "SCALING_LABEL",
    "NoiseModel",
    "vortex_density",
    "decay_interaction",
    "bath_spectrum",
    "decay_edge_noise",
    "bulk_suppression",
    "rate_table",
    "thermal_correction_exponent",
    "GoldenRuleResult",
    "matrix_element",
    "golden_rule_rate",
    "golden_rule_numeric",
    "fit_exponent",
    "DISORDER_KINDS",
    "SWEEP_HEADER",
    "DisorderSpec",
    "SweepResult",
    "link_jitter",
    "disordered_gauge",
    "realization",
    "disorder_sweep",
]
