"""循环传播子与计时表.

U(τ_c) = e^{-iHΔt/2} P_4 e^{-iHΔt} P_3 e^{-iHΔt} P_2 e^{-iHΔt} P_1 e^{-iHΔt/2}，
作为可组合的态矢量作用给出；小系统可以展开成稠密矩阵。
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.exponential import EvolutionMethod, TimeEvolution
from spinforge.algebra.pauli import OperatorSum
from spinforge.algebra.states import StateVector
from spinforge.constants import NUMERIC_DEFAULTS
from spinforge.pulses.cycle import CollectiveRotation, PulseCycle, pulse_unitary


class CyclePropagator:
    """一个完整脉冲循环的传播子.

    稠密模式下首次使用时把整个循环乘成一个矩阵；Krylov 模式下逐段作用。

    Attributes:
        hamiltonian: 自由演化哈密顿量 H (rad/s)。
        cycle: 脉冲循环。
        convention: 自旋约定。
    """

    def __init__(
        self,
        hamiltonian: OperatorSum,
        cycle: PulseCycle,
        convention: SpinConvention = DEFAULT_CONVENTION,
        method: EvolutionMethod | str = EvolutionMethod.AUTO,
    ) -> None:
        if not cycle.is_cyclic(convention):
            logger.warning("Pulse sequence is not cyclic; zeroth-order averaging does not apply")
        self.hamiltonian = hamiltonian
        self.cycle = cycle
        self.convention = convention
        self.evolution = TimeEvolution(hamiltonian, method)
        self.rotations: tuple[CollectiveRotation, ...] = tuple(
            pulse_unitary(pulse, hamiltonian.n_sites, convention) for pulse in cycle.pulses
        )
        self._dense: np.ndarray | None = None

    @property
    def n_sites(self) -> int:
        return self.hamiltonian.n_sites

    def _apply_segments(self, amplitudes: np.ndarray) -> np.ndarray:
        durations = self.cycle.free_durations
        current = self.evolution.step(amplitudes, durations[0])
        for rotation, duration in zip(self.rotations, durations[1:], strict=True):
            current = rotation.apply(current)
            current = self.evolution.step(current, duration)
        return current

    def to_dense(self) -> np.ndarray:
        """稠密循环矩阵 (n <= 12)."""
        if self._dense is None:
            if self.n_sites > NUMERIC_DEFAULTS.DENSE_MAX_SITES:
                raise ValueError(
                    f"dense cycle requested for {self.n_sites} sites "
                    f"(limit {NUMERIC_DEFAULTS.DENSE_MAX_SITES})"
                )
            durations = self.cycle.free_durations
            dense = self.evolution.unitary(durations[0])
            for rotation, duration in zip(self.rotations, durations[1:], strict=True):
                dense = rotation.to_dense() @ dense
                dense = self.evolution.unitary(duration) @ dense
            self._dense = dense
        return self._dense

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """一个循环作用到振幅上."""
        if self.evolution.method is EvolutionMethod.DENSE:
            return self.to_dense() @ amplitudes
        return self._apply_segments(amplitudes)

    def apply_state(self, psi: StateVector) -> StateVector:
        if psi.n_sites != self.n_sites:
            raise ValueError(f"propagator acts on {self.n_sites} sites but state has {psi.n_sites}")
        return psi.with_amplitudes(self.apply(psi.amplitudes))


def cycle_propagator(
    hamiltonian: OperatorSum,
    cycle: PulseCycle,
    convention: SpinConvention = DEFAULT_CONVENTION,
    method: EvolutionMethod | str = EvolutionMethod.AUTO,
) -> CyclePropagator:
    """构造循环传播子 U(τ_c)."""
    return CyclePropagator(hamiltonian, cycle, convention, method)


@dataclass(frozen=True)
class CycleSchedule:
    """脉冲循环的墙钟时间表.

    Attributes:
        delta_t: 脉冲间隔 Δt (s)。
        tau_p: 单个脉冲宽度 (s)。
        n_cycles: 循环次数。
        n_pulses: 每个循环的脉冲数。
    """

    delta_t: float
    tau_p: float
    n_cycles: int
    n_pulses: int = 4

    def __post_init__(self) -> None:
        if not self.delta_t > 0:
            raise ValueError(f"delta_t must be > 0, got {self.delta_t}")
        if self.tau_p < 0:
            raise ValueError(f"tau_p must be >= 0, got {self.tau_p}")
        if self.n_cycles < 1:
            raise ValueError(f"n_cycles must be >= 1, got {self.n_cycles}")

    @property
    def free_time_per_cycle(self) -> float:
        return self.n_pulses * self.delta_t

    @property
    def cycle_time(self) -> float:
        """τ_c = 4Δt + 4τ_p."""
        return self.n_pulses * (self.delta_t + self.tau_p)

    @property
    def total_time(self) -> float:
        return self.n_cycles * self.cycle_time

    @property
    def total_free_time(self) -> float:
        return self.n_cycles * self.free_time_per_cycle

    def wall_times(self) -> np.ndarray:
        """每个循环结束时的墙钟时间 (含 t=0)."""
        return np.arange(self.n_cycles + 1) * self.cycle_time

    def free_times(self) -> np.ndarray:
        """每个循环结束时累计的自由演化时间 (含 t=0)."""
        return np.arange(self.n_cycles + 1) * self.free_time_per_cycle


def schedule(delta_t: float, tau_p: float, n_cycles: int) -> CycleSchedule:
    """四脉冲循环的计时表."""
    return CycleSchedule(delta_t, tau_p, n_cycles)
