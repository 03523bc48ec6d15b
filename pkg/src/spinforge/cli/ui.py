"""CLI UI 组件.

用 rich 表格展示检查结果、内置实验与平均哈密顿量残差。
"""

from __future__ import annotations

from collections.abc import Sequence

from rich import box
from rich.console import Console
from rich.table import Table
from rich.text import Text

from spinforge.experiments.averaging_check import AHT_RESIDUAL_TOL, AveragingResidual
from spinforge.experiments.results import CheckResult

console = Console()


def _table(title: str) -> Table:
    return Table(
        title=title,
        box=box.ROUNDED,
        show_header=True,
        header_style="blue bold",
        border_style="dim",
        padding=(0, 1),
    )


def _number(value: float | None) -> str:
    return "-" if value is None else f"{value:.6g}"


def render_checks(title: str, checks: Sequence[CheckResult]) -> None:
    """打印不变量检查表."""
    table = _table(title)
    table.add_column("check", min_width=20)
    table.add_column("measured", justify="right")
    table.add_column("threshold", justify="right")
    table.add_column("status", width=6)
    table.add_column("detail", overflow="fold")

    for check in checks:
        table.add_row(
            check.name,
            _number(check.measured),
            _number(check.threshold),
            Text("PASS", style="green") if check.passed else Text("FAIL", style="red bold"),
            Text(check.detail, style="dim"),
        )
    console.print(table)


def render_experiments(configs: dict[str, tuple[str, str]]) -> None:
    """打印内置实验列表.

    Args:
        configs: 配置名到 (实验类型, 说明) 的映射。
    """
    table = _table("bundled experiments")
    table.add_column("config", style="cyan")
    table.add_column("experiment")
    table.add_column("description", overflow="fold")
    for name, (kind, description) in configs.items():
        table.add_row(name, kind, description)
    console.print(table)


def render_residuals(residuals: Sequence[AveragingResidual]) -> None:
    table = _table("average Hamiltonian vs effective Hamiltonian")
    table.add_column("N per chain", justify="right")
    table.add_column("terms", justify="right")
    table.add_column("residual", justify="right")
    table.add_column("status", width=6)
    for r in residuals:
        passed = r.residual < AHT_RESIDUAL_TOL
        table.add_row(
            str(r.n_per_chain),
            str(r.n_terms),
            f"{r.residual:.3e}",
            Text("PASS", style="green") if passed else Text("FAIL", style="red bold"),
        )
    console.print(table)
