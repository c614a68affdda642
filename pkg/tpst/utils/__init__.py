# coding=utf-8
"""
工具模块 - 错误类型、并行映射、数值格式化
"""

from tpst.utils.errors import (
    TPSTError,
    ConfigError,
    PreconditionError,
    InvalidPathError,
    ChiralityError,
    NumericalError,
    LeakageError,
)
from tpst.utils.numfmt import fmt_float, round_floats
from tpst.utils.parallel import parallel_map, default_jobs

__all__ = [
    "TPSTError",
    "ConfigError",
    "PreconditionError",
    "InvalidPathError",
    "ChiralityError",
    "NumericalError",
    "LeakageError",
    "fmt_float",
    "round_floats",
    "parallel_map",
    "default_jobs",
]
