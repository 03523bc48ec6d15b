"""spinforge CLI 模块

提供命令行界面的展示组件：
- 不变量检查表
- 内置实验列表
- 平均哈密顿量残差表
"""

from spinforge.cli.ui import (
    console,
    render_checks,
    render_experiments,
    render_residuals,
)

__all__ = [
    "console",
    "render_checks",
    "render_experiments",
    "render_residuals",
]
