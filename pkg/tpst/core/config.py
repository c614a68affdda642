# coding=utf-8
"""
配置校验模块

在任何计算之前校验 YAML 配置：未知键、叶子类型与取值范围，
并给出配置内容摘要 config_hash（写入每个输出文件）。
"""

import hashlib
import json
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

from tpst.utils.errors import ConfigError

HASH_LENGTH = 12


@dataclass(frozen=True)
class Field:
    """叶子字段：允许的类型、可选取值与范围检查"""

    types: Tuple[type, ...]
    choices: Tuple[Any, ...] = ()
    check: Optional[Callable[[Any], bool]] = None
    hint: str = ""
    nullable: bool = False


def _positive(x) -> bool:
    return x > 0


def _nonnegative(x) -> bool:
    return x >= 0


NUMBER = (int, float)
POSITIVE = Field(NUMBER, check=_positive, hint="必须为正")
NONNEGATIVE = Field(NUMBER, check=_nonnegative, hint="必须非负")
SIZE = Field((int,), check=lambda x: x >= 1, hint="必须 >= 1")
SITE = Field((list,), check=lambda x: len(x) == 3, hint="格式为 [i, j, 子格]", nullable=True)

GEOMETRY_SECTION = {"ly": SIZE, "lx": SIZE}

SCHEMA: Dict[str, Any] = {
    "lattice": {
        "kind": Field((str,), choices=("torus", "cylinder", "droplet")),
        "ly": SIZE,
        "lx": SIZE,
        "boundary": Field((str,), choices=("zigzag",)),
        "kappa": POSITIVE,
        "gauge_deltas": Field((list,)),
        "reverse_triangles": Field((bool,)),
    },
    "fermion": {
        "edge_rows": SIZE,
        "vortex": {
            **GEOMETRY_SECTION,
            "species": Field((list,), check=lambda x: all(s in ("triangle", "dodecagon") for s in x),
                             hint="只能包含 triangle / dodecagon"),
            "separations": Field((list,), check=lambda x: all(isinstance(s, int) for s in x), hint="必须为整数列表"),
        },
        "chern": {
            "size": SIZE,
            "grid": Field((int,), check=lambda x: x >= 2, hint="必须 >= 2"),
            "bloch_grid": Field((int,), check=lambda x: x >= 3, hint="必须 >= 3"),
        },
    },
    "transfer": {
        "regime": Field((str,), choices=("dot", "droplet")),
        "dot": {
            **GEOMETRY_SECTION,
            "site_a": SITE,
            "site_b": SITE,
            "ratio": Field(NUMBER, check=_positive, hint="必须为正", nullable=True),
            "g_l": Field(NUMBER, check=_positive, hint="必须为正", nullable=True),
            "mode": Field((int,), check=_nonnegative, hint="必须非负", nullable=True),
            "form": Field((str,), choices=("secular", "full")),
            "method": Field((str,), choices=("exact", "split4", "rk4")),
            "samples": Field((int,), check=lambda x: x >= 2, hint="必须 >= 2"),
        },
        "droplet": {
            "channel": Field((str,), choices=("lattice", "ring")),
            "ly": Field((int,), check=lambda x: x >= 3 and x % 2 == 1, hint="必须为 >= 3 的奇数", nullable=True),
            "lx": Field((int,), check=lambda x: x >= 2, hint="必须 >= 2"),
            "arc": SIZE,
            "upstream": SIZE,
            "delta_s": POSITIVE,
            "sigma": POSITIVE,
            "center": Field(NUMBER, check=_positive, hint="必须为正", nullable=True),
            "delay": Field(NUMBER, check=_nonnegative, hint="必须非负", nullable=True),
            "g_max": Field(NUMBER, check=_positive, hint="必须为正", nullable=True),
            "eps_res": POSITIVE,
            "time_step": POSITIVE,
            "method": Field((str,), choices=("exact", "split4", "rk4")),
            "strict": Field((bool,)),
            "compensate": Field((bool,)),
            "ring": {
                "length": Field((int,), check=lambda x: x >= 2 and x % 2 == 0, hint="必须为正偶数"),
                "velocity": POSITIVE,
                "delta_s": POSITIVE,
                "site_a": Field((int,), check=_nonnegative, hint="必须非负"),
                "site_b": Field((int,), check=_nonnegative, hint="必须非负"),
            },
        },
    },
    "noise": {
        "temperature": NONNEGATIVE,
        "vortex_gap": POSITIVE,
        "n_plaquettes": SIZE,
        "perimeter": NONNEGATIVE,
        "interaction": NONNEGATIVE,
        "kappa_prime": Field(NUMBER, check=_nonnegative, hint="必须非负", nullable=True),
        "correlation_time": POSITIVE,
        "localization_length": POSITIVE,
        "velocity": POSITIVE,
        "delta_s": POSITIVE,
        "distance": NONNEGATIVE,
        "bath": Field((str,), choices=("thermal", "lorentzian")),
        "momenta": Field((list,), check=lambda x: len(x) > 0 and all(p > 0 for p in x), hint="必须为非空正数列表"),
        "temperatures": Field((list,), check=lambda x: len(x) > 0 and all(t >= 0 for t in x), hint="必须为非空非负列表"),
        "golden_rule": {
            "interaction": NONNEGATIVE,
            "velocity": POSITIVE,
            "p": POSITIVE,
            "decade": Field(NUMBER, check=lambda x: x > 1, hint="必须 > 1"),
            "points": Field((int,), check=lambda x: x >= 2, hint="必须 >= 2"),
        },
        "disorder": {
            **GEOMETRY_SECTION,
            "kind": Field((str,), choices=("jitter", "bulk_pairs", "edge_vortex")),
            "strength": NONNEGATIVE,
            "n_pairs": SIZE,
            "min_distance": NONNEGATIVE,
            "retune": Field((str,), choices=("none", "energy")),
            "n_seeds": SIZE,
            "ratio": POSITIVE,
            "site_a": SITE,
            "site_b": SITE,
        },
    },
    "oracle": {
        "cluster": Field((str,), choices=("two_spin", "triangle", "droplet", "register")),
        "ratio": POSITIVE,
        "mu": POSITIVE,
        "spin_cap": SIZE,
        "leakage_threshold": POSITIVE,
        "tolerance": POSITIVE,
    },
    "output": {
        "dir": Field((str,)),
        "format": Field((str,), choices=("csv", "json")),
        "verbose": Field((bool,)),
        "jobs": Field((int,), check=lambda x: x >= 1, hint="必须 >= 1", nullable=True),
        "seed": Field((int,), check=_nonnegative, hint="必须非负"),
    },
}


def _check_leaf(key: str, value: Any, spec: Field) -> None:
    if value is None:
        if spec.nullable:
            return
        raise ConfigError(f"配置项 {key} 不能为空")
    # bool 是 int 的子类，整数字段不接受 true/false
    if isinstance(value, bool) and bool not in spec.types:
        raise ConfigError(f"配置项 {key} 类型错误：收到布尔值")
    if not isinstance(value, spec.types):
        expected = "/".join(t.__name__ for t in spec.types)
        raise ConfigError(f"配置项 {key} 类型错误：期望 {expected}，收到 {type(value).__name__}")
    if spec.choices and value not in spec.choices:
        raise ConfigError(
            f"配置项 {key} 取值 '{value}' 无效",
            suggestion=f"可选: {', '.join(str(c) for c in spec.choices)}"
        )
    if spec.check is not None:
        try:
            ok = spec.check(value)
        except TypeError:
            ok = False
        if not ok:
            raise ConfigError(f"配置项 {key} 取值 {value!r} 无效：{spec.hint}")


def _walk(data: Any, schema: Dict[str, Any], prefix: str) -> None:
    if not isinstance(data, dict):
        raise ConfigError(f"配置节 {prefix or '<root>'} 必须是映射")
    for key, value in data.items():
        dotted = f"{prefix}.{key}" if prefix else str(key)
        if key not in schema:
            raise ConfigError(
                f"未知配置项 {dotted}",
                suggestion=f"{prefix or '顶层'} 下可用的键: {', '.join(sorted(schema))}"
            )
        spec = schema[key]
        if isinstance(spec, dict):
            _walk(value if value is not None else {}, spec, dotted)
        else:
            _check_leaf(dotted, value, spec)


def validate_config(raw: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """
    校验原始配置文档

    Args:
        raw: yaml.safe_load 的结果（空文件为 None）

    Returns:
        校验后的文档（空文件返回 {}）

    Raises:
        ConfigError: 未知键、类型错误或取值越界
    """
    if raw is None:
        return {}
    _walk(raw, SCHEMA, "")
    return raw


def config_hash(raw: Dict[str, Any]) -> str:
    """
    配置内容摘要

    对排序后的 JSON 取 md5 前 12 位，相同内容总是得到相同摘要。
    """
    payload = json.dumps(raw, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return hashlib.md5(payload.encode("utf-8")).hexdigest()[:HASH_LENGTH]
