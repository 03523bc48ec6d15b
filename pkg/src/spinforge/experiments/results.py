"""实验结果、不变量检查与输出文件.

CSV 使用 17 位有效数字，同一种子与线程数下输出逐字节一致。
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger

CSV_FORMAT = "%.17g"


@dataclass(frozen=True)
class CheckResult:
    """一次不变量检查.

    Attributes:
        name: 检查名称。
        passed: 是否通过。
        measured: 实测值。
        threshold: 阈值。
        detail: 补充说明。
    """

    name: str
    passed: bool
    measured: float | None = None
    threshold: float | None = None
    detail: str = ""

    @classmethod
    def below(cls, name: str, measured: float, threshold: float, detail: str = "") -> CheckResult:
        """measured < threshold."""
        return cls(name, bool(measured < threshold), float(measured), threshold, detail)

    @classmethod
    def above(cls, name: str, measured: float, threshold: float, detail: str = "") -> CheckResult:
        """measured > threshold."""
        return cls(name, bool(measured > threshold), float(measured), threshold, detail)


@dataclass
class ExperimentResult:
    """一次实验的全部产物.

    Attributes:
        name: 实验名称。
        tables: CSV 文件名到 {列名: 数组} 的映射。
        summary: 写入 summary.json 的数据。
        checks: 不变量检查结果。
    """

    name: str
    tables: dict[str, dict[str, np.ndarray]] = field(default_factory=dict)
    summary: dict[str, Any] = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add_table(self, filename: str, columns: dict[str, np.ndarray]) -> None:
        lengths = {len(values) for values in columns.values()}
        if len(lengths) != 1:
            raise ValueError(f"columns of {filename} have different lengths: {sorted(lengths)}")
        self.tables[filename] = columns


def write_csv(path: Path, columns: dict[str, np.ndarray]) -> None:
    data = np.column_stack([np.asarray(values, dtype=np.float64) for values in columns.values()])
    np.savetxt(
        path, data, fmt=CSV_FORMAT, delimiter=",", header=",".join(columns), comments=""
    )


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, list | tuple):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    return value


def write_results(result: ExperimentResult, output_dir: Path) -> list[Path]:
    """写出 CSV 表和 summary.json.

    Returns:
        写出的文件路径列表。
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for filename, columns in result.tables.items():
        path = output_dir / filename
        write_csv(path, columns)
        written.append(path)

    summary = {
        "experiment": result.name,
        "passed": result.passed,
        "checks": [asdict(check) for check in result.checks],
        **_jsonable(result.summary),
    }
    summary_path = output_dir / "summary.json"
    summary_path.write_text(
        json.dumps(summary, indent=2, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    written.append(summary_path)
    logger.info(f"Wrote {len(written)} files to {output_dir}")
    return written
