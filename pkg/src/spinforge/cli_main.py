"""spinforge CLI 入口.

退出码: 0 成功；1 配置错误；2 至少一项不变量检查失败。
"""

from __future__ import annotations

from pathlib import Path

import typer

from spinforge import __version__
from spinforge.algebra.convention import SpinConvention
from spinforge.cli import console, render_checks, render_experiments, render_residuals
from spinforge.config.loader import ConfigError, load_experiment_config, load_runtime_settings
from spinforge.config.schema import CouplingConfig, ExperimentConfig
from spinforge.experiments.averaging_check import AHT_RESIDUAL_TOL, averaging_residuals
from spinforge.experiments.registry import bundled_config, bundled_configs, run_experiment
from spinforge.experiments.results import write_results

EXIT_CONFIG_ERROR = 1
EXIT_CHECK_FAILED = 2

app = typer.Typer(
    name="spinforge",
    help="工程化自旋库模拟器: 脉冲平均、热化、热机与过程层析.",
    no_args_is_help=True,
)


@app.callback()
def main(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v INFO, -vv DEBUG."),
    log_dir: Path | None = typer.Option(
        None, "--log-dir", help="写入日志文件的目录，缺省不写文件。"
    ),
) -> None:
    """spinforge - 工程化自旋库模拟器."""
    from spinforge.utils.logger import setup_logger

    if verbose >= 2:
        console_level = "DEBUG"
    elif verbose == 1:
        console_level = "INFO"
    else:
        console_level = load_runtime_settings().log_level

    setup_logger(log_dir=log_dir, console_level=console_level, console_enabled=True)


@app.command()
def version() -> None:
    """显示版本信息."""
    console.print(f"[bold cyan]spinforge[/bold cyan] version: [green]{__version__}[/green]")


def _load(target: str) -> tuple[str, ExperimentConfig]:
    """target 可以是 YAML 路径或内置配置名."""
    path = Path(target)
    if path.suffix in (".yaml", ".yml") or path.exists():
        return path.stem, load_experiment_config(path)
    try:
        return target, bundled_config(target)
    except KeyError as e:
        raise ConfigError(str(e.args[0])) from e


@app.command("run")
def run(
    config: str = typer.Argument(..., help="实验 YAML 路径或内置配置名。"),
    threads: int | None = typer.Option(None, "--threads", "-t", min=1, help="并行线程数。"),
    output: Path | None = typer.Option(None, "--output", "-o", help="输出目录。"),
) -> None:
    """运行一个实验，写出 CSV 与 summary.json."""
    try:
        name, experiment = _load(config)
    except ConfigError as e:
        console.print(f"[red]config error[/red] {e.diagnostic()}")
        raise typer.Exit(EXIT_CONFIG_ERROR) from e

    settings = load_runtime_settings(threads)
    output_dir = output or experiment.output or settings.output_dir / name
    result = run_experiment(experiment, settings.threads)
    written = write_results(result, output_dir)

    render_checks(f"{name} ({experiment.experiment})", result.checks)
    console.print(f"[dim]{len(written)} file(s) written to {output_dir}[/dim]")
    if not result.passed:
        raise typer.Exit(EXIT_CHECK_FAILED)


@app.command("aht-check")
def aht_check(
    max_n: int = typer.Option(3, "--max-n", min=1, help="最大每链氢原子数。"),
    convention: SpinConvention = typer.Option(
        SpinConvention.SPIN_HALF, "--convention", help="自旋算符约定。"
    ),
) -> None:
    """比较零阶平均哈密顿量与有效哈密顿量."""
    residuals = averaging_residuals(max_n, CouplingConfig().constants(), convention)
    render_residuals(residuals)
    if any(r.residual >= AHT_RESIDUAL_TOL for r in residuals):
        raise typer.Exit(EXIT_CHECK_FAILED)


@app.command("list-experiments")
def list_experiments() -> None:
    """列出内置实验配置."""
    configs: dict[str, tuple[str, str]] = {}
    for name in bundled_configs():
        experiment = bundled_config(name)
        configs[name] = (str(experiment.experiment), experiment.description)
    render_experiments(configs)


if __name__ == "__main__":
    app()
