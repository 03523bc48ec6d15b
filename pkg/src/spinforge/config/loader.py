"""spinforge 配置加载工具.

实验配置来自 YAML 文件；运行时设置来自 SPINFORGE_* 环境变量。
解析或校验失败统一转换为带字段/行号诊断的 ConfigError。
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import yaml
from loguru import logger
from pydantic import ValidationError

from spinforge.config.schema import ExperimentConfig, RuntimeSettings


class ConfigError(ValueError):
    """配置错误.

    Attributes:
        message: 错误描述。
        field: 出错字段的点分路径。
        line: 出错位置的行号 (从 1 开始)。
    """

    def __init__(self, message: str, field: str | None = None, line: int | None = None) -> None:
        self.message = message
        self.field = field
        self.line = line
        super().__init__(self.diagnostic())

    def diagnostic(self) -> str:
        where = []
        if self.field:
            where.append(f"field '{self.field}'")
        if self.line is not None:
            where.append(f"line {self.line}")
        return f"{', '.join(where)}: {self.message}" if where else self.message


def _locate(text: str, loc: tuple[int | str, ...]) -> int | None:
    """沿校验错误的 loc 遍历 YAML 节点树，返回最深可达节点所在行."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError:
        return None
    line = None
    for part in loc:
        if isinstance(node, yaml.MappingNode):
            entry = next(((key, value) for key, value in node.value if key.value == part), None)
            if entry is None:
                break
            key, node = entry
            line = key.start_mark.line + 1
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int):
            if not 0 <= part < len(node.value):
                break
            node = node.value[part]
            line = node.start_mark.line + 1
        else:
            break
    return line


def parse_experiment_config(text: str, source: str = "<string>") -> ExperimentConfig:
    """解析 YAML 文本为 ExperimentConfig.

    Args:
        text: YAML 内容。
        source: 用于日志的来源名。

    Returns:
        校验后的配置。

    Raises:
        ConfigError: YAML 语法错误或字段校验失败。
    """
    try:
        data: Any = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError(f"invalid YAML: {getattr(e, 'problem', e)}", line=line) from e

    if not isinstance(data, dict):
        raise ConfigError("config must be a mapping at the top level", line=1)

    try:
        config = ExperimentConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = tuple(error["loc"])
        field = ".".join(str(part) for part in loc) or None
        raise ConfigError(error["msg"], field=field, line=_locate(text, loc)) from e

    logger.debug(f"Loaded {config.experiment} config from {source}")
    return config


def load_experiment_config(path: Path | str) -> ExperimentConfig:
    """从文件加载实验配置."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    return parse_experiment_config(path.read_text(encoding="utf-8"), str(path))


def load_runtime_settings(threads: int | None = None) -> RuntimeSettings:
    """加载运行时设置.

    优先级：SPINFORGE_THREADS 环境变量 > --threads 参数 > 默认值。
    """
    settings = RuntimeSettings()
    if settings.threads is None and threads is not None:
        settings = settings.model_copy(update={"threads": threads})
    return settings
