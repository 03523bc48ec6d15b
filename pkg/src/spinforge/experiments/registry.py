"""实验注册表与内置配置."""

from __future__ import annotations

from collections.abc import Callable
from importlib.resources import files

from loguru import logger

from spinforge.config.loader import parse_experiment_config
from spinforge.config.schema import ExperimentConfig, ExperimentKind
from spinforge.experiments.averaging_check import run_aht_check
from spinforge.experiments.convergence import run_convergence
from spinforge.experiments.machine import run_machine_experiment
from spinforge.experiments.results import ExperimentResult
from spinforge.experiments.thermalization import run_bath_scenarios, run_thermalization
from spinforge.experiments.tomography import run_tomography

Runner = Callable[[ExperimentConfig, int | None], ExperimentResult]

RUNNERS: dict[ExperimentKind, Runner] = {
    ExperimentKind.FIG2: run_convergence,
    ExperimentKind.FIG3: run_thermalization,
    ExperimentKind.FIG4: run_bath_scenarios,
    ExperimentKind.MACHINE: run_machine_experiment,
    ExperimentKind.TOMOGRAPHY: run_tomography,
    ExperimentKind.AHT_CHECK: run_aht_check,
}

CONFIG_PACKAGE = "spinforge.experiments.configs"


def bundled_configs() -> dict[str, str]:
    """内置配置名到 YAML 文本的映射，按名称排序."""
    configs = {
        entry.name.removesuffix(".yaml"): entry.read_text(encoding="utf-8")
        for entry in files(CONFIG_PACKAGE).iterdir()
        if entry.name.endswith(".yaml")
    }
    return dict(sorted(configs.items()))


def bundled_config(name: str) -> ExperimentConfig:
    """按名称加载内置配置.

    Raises:
        KeyError: 没有同名的内置配置。
    """
    configs = bundled_configs()
    if name not in configs:
        raise KeyError(f"no bundled config named '{name}'; available: {', '.join(configs)}")
    return parse_experiment_config(configs[name], f"{CONFIG_PACKAGE}/{name}.yaml")


def run_experiment(config: ExperimentConfig, threads: int | None = 1) -> ExperimentResult:
    """运行配置指定的实验."""
    logger.info(f"Running experiment {config.experiment} with threads={threads}")
    result = RUNNERS[config.experiment](config, threads)
    failed = [check.name for check in result.checks if not check.passed]
    if failed:
        logger.warning(f"{len(failed)} check(s) failed: {', '.join(failed)}")
    return result
