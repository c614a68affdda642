# coding=utf-8
"""
输出后端抽象基类和数据模型

定义统一的输出接口，所有输出后端都需要实现这些方法
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence


@dataclass
class RunRecord:
    """一次命令运行的记录"""

    command: str                        # 子命令名（如 bands, transfer）
    config_hash: str                    # 配置内容摘要
    version: str                        # tpst 版本
    seed: int = 0                       # 随机种子
    files: List[str] = field(default_factory=list)   # 已写出的文件（相对输出目录）
    summary: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "version": self.version,
            "seed": self.seed,
            "files": list(self.files),
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunRecord":
        """从字典创建"""
        return cls(
            command=data.get("command", ""),
            config_hash=data.get("config_hash", ""),
            version=data.get("version", ""),
            seed=data.get("seed", 0),
            files=list(data.get("files", [])),
            summary=data.get("summary", {}),
        )


class OutputBackend(ABC):
    """
    输出后端抽象基类

    所有输出后端都需要实现这些方法，以支持:
    - 写出带固定表头的 CSV 表
    - 写出键排序的 JSON 文档
    - 记录运行信息
    """

    @property
    @abstractmethod
    def backend_name(self) -> str:
        pass

    @abstractmethod
    def write_csv(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
        """
        写出 CSV 表

        Args:
            name: 文件名（相对输出目录）
            header: 列名
            rows: 数据行

        Returns:
            写出的文件路径
        """
        pass

    @abstractmethod
    def write_json(self, name: str, payload: Dict[str, Any]) -> str:
        """写出 JSON 文档，返回文件路径"""
        pass

    @abstractmethod
    def record(self, record: RunRecord) -> Optional[str]:
        """写出运行记录"""
        pass
