# coding=utf-8
"""
输出模块 - 运行记录与一次写入的本地文件后端
"""

from tpst.storage.base import OutputBackend, RunRecord
from tpst.storage.local import RECORD_NAME, LocalOutputBackend

__all__ = ["OutputBackend", "RunRecord", "LocalOutputBackend", "RECORD_NAME"]
