# coding=utf-8
"""
配置加载模块

负责从 YAML 配置文件和环境变量加载配置。
"""

import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from tpst.core.config import config_hash, validate_config
from tpst.utils.errors import ConfigError


def _get_env_int(key: str, default: Optional[int] = None) -> Optional[int]:
    """从环境变量获取整数值，未设置或无法解析时返回 default"""
    value = os.environ.get(key, "").strip()
    if not value:
        return default
    try:
        return int(value)
    except ValueError:
        print(f"[警告] 环境变量 {key}={value!r} 不是整数，已忽略")
        return default


def _get_env_str(key: str, default: str = "") -> str:
    """从环境变量获取字符串值"""
    return os.environ.get(key, "").strip() or default


def _site(value) -> Optional[tuple]:
    return None if value is None else (int(value[0]), int(value[1]), str(value[2]))


def _load_lattice_config(config_data: Dict) -> Dict:
    """加载晶格配置"""
    lattice = config_data.get("lattice") or {}
    return {
        "KIND": lattice.get("kind", "cylinder"),
        "LY": lattice.get("ly", 61),
        "LX": lattice.get("lx", 40),
        "BOUNDARY": lattice.get("boundary", "zigzag"),
        "KAPPA": float(lattice.get("kappa", 1.0)),
        "GAUGE_DELTAS": [list(d) for d in lattice.get("gauge_deltas", []) or []],
        "REVERSE_TRIANGLES": lattice.get("reverse_triangles", False),
    }


def _load_fermion_config(config_data: Dict) -> Dict:
    """加载费米子配置（能带、涡旋能隙、拓扑）"""
    fermion = config_data.get("fermion") or {}
    vortex = fermion.get("vortex") or {}
    chern = fermion.get("chern") or {}
    return {
        "EDGE_ROWS": fermion.get("edge_rows", 3),
        "VORTEX": {
            "LY": vortex.get("ly", 30),
            "LX": vortex.get("lx", 30),
            "SPECIES": list(vortex.get("species", ["triangle", "dodecagon"])),
            "SEPARATIONS": list(vortex.get("separations", [3, 4, 5, 6, 7, 8])),
        },
        "CHERN": {
            "SIZE": chern.get("size", 3),
            "GRID": chern.get("grid", 24),
            "BLOCH_GRID": chern.get("bloch_grid", 6),
        },
    }


def _load_transfer_config(config_data: Dict) -> Dict:
    """加载传输配置"""
    transfer = config_data.get("transfer") or {}
    dot = transfer.get("dot") or {}
    droplet = transfer.get("droplet") or {}
    ring = droplet.get("ring") or {}
    return {
        "REGIME": transfer.get("regime", "dot"),
        "DOT": {
            "LY": dot.get("ly", 10),
            "LX": dot.get("lx", 10),
            "SITE_A": _site(dot.get("site_a")),
            "SITE_B": _site(dot.get("site_b")),
            "RATIO": dot.get("ratio", 0.05),
            "G_L": dot.get("g_l"),
            "MODE": dot.get("mode"),
            "FORM": dot.get("form", "secular"),
            "METHOD": dot.get("method", "exact"),
            "SAMPLES": dot.get("samples", 201),
        },
        "DROPLET": {
            "CHANNEL": droplet.get("channel", "lattice"),
            "LY": droplet.get("ly"),
            "LX": droplet.get("lx", 5),
            "ARC": droplet.get("arc", 8),
            "UPSTREAM": droplet.get("upstream", 10),
            "DELTA_S": float(droplet.get("delta_s", 0.2)),
            "SIGMA": float(droplet.get("sigma", 20.0)),
            "CENTER": droplet.get("center"),
            "DELAY": droplet.get("delay"),
            "G_MAX": droplet.get("g_max", 1.5),
            "EPS_RES": float(droplet.get("eps_res", 1e-6)),
            "TIME_STEP": float(droplet.get("time_step", 1.0)),
            "METHOD": droplet.get("method", "split4"),
            "STRICT": droplet.get("strict", True),
            "COMPENSATE": droplet.get("compensate", True),
            "RING": {
                "LENGTH": ring.get("length", 600),
                "VELOCITY": float(ring.get("velocity", 1.0)),
                "DELTA_S": float(ring.get("delta_s", 1.5707963267948966)),
                "SITE_A": ring.get("site_a", 0),
                "SITE_B": ring.get("site_b", 150),
            },
        },
    }


def _load_noise_config(config_data: Dict) -> Dict:
    """加载噪声配置"""
    noise = config_data.get("noise") or {}
    golden = noise.get("golden_rule") or {}
    disorder = noise.get("disorder") or {}
    return {
        "MODEL": {
            "temperature": float(noise.get("temperature", 0.0)),
            "vortex_gap": float(noise.get("vortex_gap", 0.14)),
            "n_plaquettes": int(noise.get("n_plaquettes", 1000)),
            "perimeter": float(noise.get("perimeter", 100.0)),
            "interaction": float(noise.get("interaction", 1.0)),
            "kappa_prime": noise.get("kappa_prime"),
            "correlation_time": float(noise.get("correlation_time", 10.0)),
            "localization_length": float(noise.get("localization_length", 1.0)),
            "velocity": float(noise.get("velocity", 1.0)),
            "delta_s": float(noise.get("delta_s", 1.0)),
            "bath": noise.get("bath", "thermal"),
        },
        "DISTANCE": float(noise.get("distance", 5.0)),
        "MOMENTA": [float(p) for p in noise.get("momenta", [0.05, 0.1, 0.2, 0.4])],
        "TEMPERATURES": [float(t) for t in noise.get("temperatures", [0.0, 0.001, 0.002, 0.004, 0.008])],
        "GOLDEN_RULE": {
            "INTERACTION": float(golden.get("interaction", 1.0)),
            "VELOCITY": float(golden.get("velocity", 1.0)),
            "P": float(golden.get("p", 0.1)),
            "DECADE": float(golden.get("decade", 10.0)),
            "POINTS": golden.get("points", 9),
        },
        "DISORDER": {
            "LY": disorder.get("ly", 14),
            "LX": disorder.get("lx", 14),
            "KIND": disorder.get("kind", "jitter"),
            "STRENGTH": float(disorder.get("strength", 0.001)),
            "N_PAIRS": disorder.get("n_pairs", 1),
            "MIN_DISTANCE": float(disorder.get("min_distance", 5.0)),
            "RETUNE": disorder.get("retune", "none"),
            "N_SEEDS": disorder.get("n_seeds", 50),
            "RATIO": float(disorder.get("ratio", 0.05)),
            "SITE_A": _site(disorder.get("site_a")),
            "SITE_B": _site(disorder.get("site_b")),
        },
    }


def _load_oracle_config(config_data: Dict) -> Dict:
    """加载多体验证配置"""
    oracle = config_data.get("oracle") or {}
    return {
        "CLUSTER": oracle.get("cluster", "droplet"),
        "RATIO": float(oracle.get("ratio", 0.02)),
        "MU": float(oracle.get("mu", 2.0)),
        "SPIN_CAP": oracle.get("spin_cap", 14),
        "LEAKAGE_THRESHOLD": float(oracle.get("leakage_threshold", 0.05)),
        "TOLERANCE": float(oracle.get("tolerance", 1e-8)),
    }


def _load_output_config(config_data: Dict) -> Dict:
    """加载输出配置（环境变量优先）"""
    output = config_data.get("output") or {}
    return {
        "DIR": _get_env_str("TPST_OUTPUT_DIR") or output.get("dir", "output"),
        "FORMAT": output.get("format", "csv"),
        "VERBOSE": output.get("verbose", True),
        "JOBS": _get_env_int("TPST_JOBS", output.get("jobs")),
        "SEED": _get_env_int("TPST_SEED", output.get("seed", 0)),
    }


def load_config(config_path: Optional[str] = None) -> Dict[str, Any]:
    """
    加载配置文件

    Args:
        config_path: 配置文件路径，默认从环境变量 CONFIG_PATH 获取或使用 config/config.yaml

    Returns:
        包含所有配置的字典

    Raises:
        ConfigError: 配置文件不存在、无法解析或校验失败
    """
    if config_path is None:
        config_path = os.environ.get("CONFIG_PATH", "config/config.yaml")

    if not Path(config_path).exists():
        raise ConfigError(f"配置文件 {config_path} 不存在", suggestion="用 --config 指定配置文件路径")

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"配置文件 {config_path} 不是合法的 YAML: {e}")

    config_data = validate_config(raw)

    config: Dict[str, Any] = {
        "CONFIG_PATH": str(config_path),
        "CONFIG_HASH": config_hash(config_data),
    }
    config["LATTICE"] = _load_lattice_config(config_data)
    config["FERMION"] = _load_fermion_config(config_data)
    config["TRANSFER"] = _load_transfer_config(config_data)
    config["NOISE"] = _load_noise_config(config_data)
    config["ORACLE"] = _load_oracle_config(config_data)
    config["OUTPUT"] = _load_output_config(config_data)

    if config["OUTPUT"]["VERBOSE"]:
        print(f"[CLI] 配置文件加载成功: {config_path}（hash {config['CONFIG_HASH']}）")
    return config
