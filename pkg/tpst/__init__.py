# coding=utf-8
"""
tpst - 手征自旋液体中的拓扑量子态传输数值实验

使用方式:
  python -m tpst bands        # 模块执行
  tpst transfer               # 安装后执行
"""

__version__ = "0.1.0"

from tpst.context import RunContext

__all__ = ["RunContext", "__version__"]
