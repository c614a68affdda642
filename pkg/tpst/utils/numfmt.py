# coding=utf-8
"""
浮点数格式化

所有输出文件统一使用 12 位有效数字，与区域设置无关。
"""

import math
from typing import Any

SIGNIFICANT_DIGITS = 12


def fmt_float(value: float) -> str:
    """格式化为 12 位有效数字（负零归一为 0）"""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        return "0"
    return format(value, f".{SIGNIFICANT_DIGITS}g")


def round_floats(obj: Any) -> Any:
    """递归地把嵌套结构中的浮点数规整到 12 位有效数字，供 JSON 输出使用"""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return fmt_float(obj)
        return float(fmt_float(obj))
    if isinstance(obj, dict):
        return {str(k): round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    # numpy 数组与标量
    if hasattr(obj, "tolist"):
        return round_floats(obj.tolist())
    return obj
