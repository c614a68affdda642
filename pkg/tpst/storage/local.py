# coding=utf-8
"""
本地输出后端 - CSV/JSON

所有文件一次写入：临时文件写完后 os.replace 原子替换；已存在的文件
除非 force 否则拒绝覆盖。浮点数统一经 fmt_float 格式化。
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from tpst.storage.base import OutputBackend, RunRecord
from tpst.utils.errors import PreconditionError
from tpst.utils.numfmt import fmt_float, round_floats

RECORD_NAME = "run.json"


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float) or hasattr(value, "dtype"):
        return fmt_float(value)
    return str(value)


class LocalOutputBackend(OutputBackend):
    """
    本地输出后端

    文件组织：{out_dir}/{name}
    """

    def __init__(self, out_dir: str, config_hash: str, version: str, force: bool = False):
        """
        Args:
            out_dir: 输出目录
            config_hash: 写入每个文件的配置摘要
            version: tpst 版本
            force: 是否允许覆盖已存在的文件
        """
        self.out_dir = Path(out_dir)
        self.config_hash = config_hash
        self.version = version
        self.force = force
        self.written: List[str] = []

    @property
    def backend_name(self) -> str:
        return "local"

    def _target(self, name: str) -> Path:
        path = self.out_dir / name
        if path.exists() and not self.force:
            raise PreconditionError(
                f"输出文件 {path} 已存在",
                code="OUTPUT_EXISTS",
                suggestion="换用 --out 指定新目录，或加 --force 覆盖"
            )
        return path

    def _atomic_write(self, path: Path, content: str) -> str:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=f".{path.name}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(content)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.written.append(str(path.relative_to(self.out_dir)))
        print(f"[存储] 已写出 {path}")
        return str(path)

    def write_csv(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
        path = self._target(name)
        buffer = io.StringIO()
        buffer.write(f"# tool=tpst {self.version}\n")
        buffer.write(f"# config_hash={self.config_hash}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return self._atomic_write(path, buffer.getvalue())

    def write_json(self, name: str, payload: Dict[str, Any]) -> str:
        path = self._target(name)
        document = dict(round_floats(payload))
        document["config_hash"] = self.config_hash
        document["version"] = self.version
        text = json.dumps(document, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
        return self._atomic_write(path, text)

    def write_table(self, name: str, header: Sequence[str], rows: Sequence[Sequence[Any]], fmt: str = "csv") -> str:
        """按 --format 写出表格：csv 或字段化的 json"""
        if fmt == "json":
            records = [dict(zip(header, row)) for row in rows]
            return self.write_json(f"{name}.json", {"columns": list(header), "rows": records})
        return self.write_csv(f"{name}.csv", header, rows)

    def record(self, record: RunRecord) -> Optional[str]:
        record.files = list(self.written)
        return self.write_json(RECORD_NAME, record.to_dict())
