"""实验运行器: 配置驱动的数值实验与不变量检查."""

from spinforge.experiments.averaging_check import (
    AHT_RESIDUAL_TOL,
    AveragingResidual,
    averaging_residual,
    averaging_residuals,
)
from spinforge.experiments.registry import (
    RUNNERS,
    bundled_config,
    bundled_configs,
    run_experiment,
)
from spinforge.experiments.results import (
    CheckResult,
    ExperimentResult,
    write_csv,
    write_results,
)

__all__ = [
    "AHT_RESIDUAL_TOL",
    "AveragingResidual",
    "CheckResult",
    "ExperimentResult",
    "RUNNERS",
    "averaging_residual",
    "averaging_residuals",
    "bundled_config",
    "bundled_configs",
    "run_experiment",
    "write_csv",
    "write_results",
]
