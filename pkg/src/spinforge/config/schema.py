"""spinforge 配置模式定义.

使用 Pydantic 定义实验配置结构，字段名带单位后缀。
"""

from __future__ import annotations

from enum import StrEnum
from pathlib import Path
from typing import Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    PositiveFloat,
    PositiveInt,
    model_validator,
)
from pydantic_settings import BaseSettings, SettingsConfigDict

from spinforge.algebra.convention import SpinConvention
from spinforge.algebra.exponential import EvolutionMethod
from spinforge.constants import HBAR, REFERENCE_DEFAULTS
from spinforge.dynamics.initial import InitialState, SiteState
from spinforge.model.topology import ChainTopology, CouplingConstants, ZeemanParams
from spinforge.pulses.cycle import PulseCycle
from spinforge.thermo.gibbs import InverseTemperature, MachineUnitary
from spinforge.thermo.machine import MachineMode

MICROSECOND = 1e-6
MILLISECOND = 1e-3


class ExperimentKind(StrEnum):
    """可运行的实验."""

    FIG2 = "fig2"
    FIG3 = "fig3"
    FIG4 = "fig4"
    MACHINE = "machine"
    TOMOGRAPHY = "tomography"
    AHT_CHECK = "aht-check"


class _StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class TopologyConfig(_StrictModel):
    """链尺寸.

    Attributes:
        hydrogens: 氢原子数列表，每项对应一次运行。
        reading: total 表示氢原子总数 2N，per-chain 表示每条链的 N。
    """

    hydrogens: list[PositiveInt] = Field(default_factory=lambda: [6], min_length=1)
    reading: Literal["total", "per-chain"] = "total"

    @model_validator(mode="after")
    def _check_counts(self) -> TopologyConfig:
        for count in self.hydrogens:
            if self.reading == "total" and count % 2:
                raise ValueError(f"total hydrogen count must be even, got {count}")
        return self

    def topologies(self) -> list[ChainTopology]:
        if self.reading == "total":
            return [ChainTopology.from_total_hydrogens(count) for count in self.hydrogens]
        return [ChainTopology(count) for count in self.hydrogens]


class CouplingConfig(_StrictModel):
    """有效耦合常数 (rad/s)，自然值 J = 4 J_eff 按需导出."""

    j_ch_eff_rad_s: float = REFERENCE_DEFAULTS.J_CH_EFF
    j_hh_eff_rad_s: float = REFERENCE_DEFAULTS.J_HH_EFF

    def constants(self) -> CouplingConstants:
        return CouplingConstants.from_effective(self.j_ch_eff_rad_s, self.j_hh_eff_rad_s)


class CycleConfig(_StrictModel):
    """脉冲循环参数.

    Attributes:
        delta_t_us: 脉冲间隔 Δt 列表 (μs)。
        tau_p_us: 脉冲宽度 (μs)。
        n_cycles: 与 delta_t_us 一一对应的循环次数。
    """

    delta_t_us: list[PositiveFloat] = Field(
        default_factory=lambda: [dt / MICROSECOND for dt in REFERENCE_DEFAULTS.DELTA_TS],
        min_length=1,
    )
    tau_p_us: NonNegativeFloat = REFERENCE_DEFAULTS.TAU_P / MICROSECOND
    n_cycles: list[PositiveInt] = Field(
        default_factory=lambda: list(REFERENCE_DEFAULTS.N_CYCLES), min_length=1
    )

    @model_validator(mode="after")
    def _check_lengths(self) -> CycleConfig:
        if len(self.delta_t_us) != len(self.n_cycles):
            raise ValueError("delta_t_us and n_cycles must have the same length")
        return self

    def cycles(
        self, convention: SpinConvention = SpinConvention.SPIN_HALF
    ) -> list[tuple[PulseCycle, int]]:
        """(四脉冲循环, 循环次数) 列表."""
        tau_p = self.tau_p_us * MICROSECOND
        return [
            (PulseCycle.four_pulse(dt * MICROSECOND, tau_p, convention), count)
            for dt, count in zip(self.delta_t_us, self.n_cycles, strict=True)
        ]


class InitialStateConfig(_StrictModel):
    """碳与热库的初态."""

    label: str = ""
    carbon: SiteState = SiteState.EXCITED
    bath: SiteState = SiteState.GROUND

    def state(self) -> InitialState:
        return InitialState(self.carbon, self.bath)


class SamplingConfig(_StrictModel):
    """时间窗口与采样.

    Attributes:
        t_total_ms: 有效哈密顿量模式的总时长 (ms)。
        n_samples: 有效模式采样点数。
        ensemble_samples: 混态热库的比特串样本数。
        track_eof: 是否记录 EoF。
        track_transverse: 是否记录 ⟨σ_x⟩、⟨σ_y⟩。
        method: 演化方法。
    """

    t_total_ms: float = Field(default=REFERENCE_DEFAULTS.WINDOW / MILLISECOND, gt=0)
    n_samples: int = Field(default=REFERENCE_DEFAULTS.EFFECTIVE_SAMPLES, ge=2)
    ensemble_samples: int = Field(default=REFERENCE_DEFAULTS.ENSEMBLE_SAMPLES, ge=1)
    track_eof: bool = True
    track_transverse: bool = False
    method: EvolutionMethod = EvolutionMethod.AUTO

    @property
    def t_total(self) -> float:
        return self.t_total_ms * MILLISECOND


class MachineConfig(_StrictModel):
    """热机参数.

    β 由 beta_per_joule 或无量纲 beta_hbar_omega (β·ħω_1) 给出，二者至多一个。

    Attributes:
        mode: analytic 或 simulated。
        unitaries: 依次运行的幺正冲程。
        beta_per_joule: 逆温度 (1/J)。
        beta_hbar_omega: β·ħω_1。
        omega1_rad_s: 拉莫尔频率 (rad/s)。
        random_draws: 解析模式下闭式校验的随机抽样次数。
    """

    mode: MachineMode = MachineMode.ANALYTIC
    unitaries: list[MachineUnitary] = Field(
        default_factory=lambda: [MachineUnitary.UPI], min_length=1
    )
    beta_per_joule: float | None = None
    beta_hbar_omega: float | None = None
    omega1_rad_s: float = Field(default=REFERENCE_DEFAULTS.OMEGA1, gt=0)
    random_draws: int = Field(default=100, ge=0)

    @model_validator(mode="after")
    def _check_beta(self) -> MachineConfig:
        if self.beta_per_joule is not None and self.beta_hbar_omega is not None:
            raise ValueError("give either beta_per_joule or beta_hbar_omega, not both")
        return self

    def zeeman(self) -> ZeemanParams:
        return ZeemanParams(self.omega1_rad_s, HBAR)

    def inverse_temperature(self) -> InverseTemperature:
        if self.beta_per_joule is not None:
            return InverseTemperature(self.beta_per_joule)
        ratio = -2.0 if self.beta_hbar_omega is None else self.beta_hbar_omega
        return InverseTemperature.from_energy_ratio(ratio, HBAR * self.omega1_rad_s)


class TomographyConfig(_StrictModel):
    """过程层析参数.

    Attributes:
        baths: 依次重构的热库初态。
        propagation: effective 用 H_eff 演化，pulsed 用脉冲循环。
        fidelity_threshold: 与理想弛豫信道的最低保真度。
        channel_time: thermalized 取窗口内碳最接近热库极化的时刻，
            window 取整个采样窗口。
    """

    baths: list[SiteState] = Field(
        default_factory=lambda: [SiteState.GROUND, SiteState.EXCITED], min_length=1
    )
    propagation: Literal["effective", "pulsed"] = "effective"
    fidelity_threshold: float = Field(default=0.98, ge=0, le=1)
    channel_time: Literal["thermalized", "window"] = "thermalized"

    @model_validator(mode="after")
    def _check_baths(self) -> TomographyConfig:
        if SiteState.MIXED in self.baths:
            raise ValueError("tomography baths must be ground or excited")
        return self


class ExperimentConfig(_StrictModel):
    """单个实验的完整配置.

    Attributes:
        experiment: 实验名称。
        description: 说明。
        convention: 自旋约定。
        topology: 链尺寸。
        couplings: 有效耦合。
        cycle: 脉冲循环。
        initial: 初态列表。
        sampling: 采样设置。
        machine: 热机设置。
        tomography: 层析设置。
        seed: 随机种子。
        output: 输出目录，缺省使用运行时设置。
    """

    experiment: ExperimentKind
    description: str = ""
    convention: SpinConvention = SpinConvention.SPIN_HALF
    topology: TopologyConfig = Field(default_factory=TopologyConfig)
    couplings: CouplingConfig = Field(default_factory=CouplingConfig)
    cycle: CycleConfig = Field(default_factory=CycleConfig)
    initial: list[InitialStateConfig] = Field(
        default_factory=lambda: [InitialStateConfig()], min_length=1
    )
    sampling: SamplingConfig = Field(default_factory=SamplingConfig)
    machine: MachineConfig = Field(default_factory=MachineConfig)
    tomography: TomographyConfig = Field(default_factory=TomographyConfig)
    seed: int = 0
    output: Path | None = None


class RuntimeSettings(BaseSettings):
    """运行时设置，可由 SPINFORGE_* 环境变量覆盖.

    Attributes:
        threads: 线程数，None 表示使用全部可用核心。
        log_level: 控制台日志级别。
        output_dir: 缺省输出目录。
    """

    threads: int | None = None
    log_level: str = "WARNING"
    output_dir: Path = Path("results")

    model_config = SettingsConfigDict(env_prefix="SPINFORGE_")
