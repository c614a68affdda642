# coding=utf-8
"""
并行映射

动量点、规范扇区、无序种子等独立任务的有序并行执行。
"""

import os
from typing import Callable, Iterable, List, Optional, TypeVar

from joblib import Parallel, delayed

T = TypeVar("T")
R = TypeVar("R")


def default_jobs() -> int:
    """默认并行宽度：可用核数"""
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T], jobs: Optional[int] = None) -> List[R]:
    """
    按输入顺序返回结果的并行 map

    任务内部主要是 LAPACK 调用，使用线程后端，局部闭包无需序列化。

    Args:
        fn: 纯函数（不修改共享输入）
        items: 任务列表
        jobs: 并行宽度，None 表示可用核数，<=1 表示串行

    Returns:
        与 items 顺序一致的结果列表
    """
    items = list(items)
    if jobs is None:
        jobs = default_jobs()
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    return Parallel(n_jobs=min(jobs, len(items)), prefer="threads")(delayed(fn)(item) for item in items)
