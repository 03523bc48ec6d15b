"""配置模块."""

from spinforge.config.loader import (
    ConfigError,
    load_experiment_config,
    load_runtime_settings,
    parse_experiment_config,
)
from spinforge.config.schema import (
    CouplingConfig,
    CycleConfig,
    ExperimentConfig,
    ExperimentKind,
    InitialStateConfig,
    MachineConfig,
    RuntimeSettings,
    SamplingConfig,
    TomographyConfig,
    TopologyConfig,
)

__all__ = [
    "ConfigError",
    "CouplingConfig",
    "CycleConfig",
    "ExperimentConfig",
    "ExperimentKind",
    "InitialStateConfig",
    "MachineConfig",
    "RuntimeSettings",
    "SamplingConfig",
    "TomographyConfig",
    "TopologyConfig",
    "load_experiment_config",
    "load_runtime_settings",
    "parse_experiment_config",
]
