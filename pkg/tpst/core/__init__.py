# coding=utf-8
"""
核心模块 - 配置加载与校验
"""

from tpst.core.config import SCHEMA, config_hash, validate_config
from tpst.core.loader import load_config

__all__ = ["SCHEMA", "config_hash", "validate_config", "load_config"]
