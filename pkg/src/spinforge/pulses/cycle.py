"""脉冲、脉冲循环与集体旋转.

理想脉冲为瞬时旋转 P = exp[-i θ Σ_sites (±S_axis)]，τ_p 只进入时间表。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property

import numpy as np

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.constants import NUMERIC_DEFAULTS

_PAULI = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
}

# 循环中自由演化的时长权重 (以 Δt 为单位)，首尾各半步
EDGE_WEIGHT = 0.5


class PulseAxis(StrEnum):
    """脉冲方向."""

    PLUS_X = "+x"
    MINUS_X = "-x"
    PLUS_Y = "+y"
    MINUS_Y = "-y"

    @property
    def label(self) -> str:
        return self.value[1].upper()

    @property
    def sign(self) -> int:
        return 1 if self.value[0] == "+" else -1


@dataclass(frozen=True)
class Pulse:
    """作用于所有格点的集体脉冲.

    Attributes:
        axis: 旋转方向 (+x, −x, +y, −y)。
        angle: 指数中的角度 θ (rad)，所有参考脉冲均为 π/2。
        tau_p: 脉冲宽度 (s)，理想模式下只用于计时。
    """

    axis: PulseAxis
    angle: float = math.pi / 2
    tau_p: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "axis", PulseAxis(self.axis))
        if self.tau_p < 0:
            raise ValueError(f"tau_p must be >= 0, got {self.tau_p}")

    def bloch_angle(self, convention: SpinConvention = DEFAULT_CONVENTION) -> float:
        """布洛赫球上绕 +axis 的物理转角."""
        return 2.0 * self.angle * self.axis.sign * convention.scale

    def single_site_unitary(self, convention: SpinConvention = DEFAULT_CONVENTION) -> np.ndarray:
        """单格点旋转 exp(-i θ (±S_axis)) = cos φ I − i sin φ σ_axis."""
        phi = self.angle * self.axis.sign * convention.scale
        return math.cos(phi) * np.eye(2, dtype=np.complex128) - 1j * math.sin(phi) * _PAULI[
            self.axis.label
        ]

    def inverse(self) -> Pulse:
        flipped = {
            PulseAxis.PLUS_X: PulseAxis.MINUS_X,
            PulseAxis.MINUS_X: PulseAxis.PLUS_X,
            PulseAxis.PLUS_Y: PulseAxis.MINUS_Y,
            PulseAxis.MINUS_Y: PulseAxis.PLUS_Y,
        }
        return Pulse(flipped[self.axis], self.angle, self.tau_p)


@dataclass(frozen=True, eq=False)
class CollectiveRotation:
    """相同单格点旋转的张量积，逐格点作用而不构造 2^n 矩阵.

    Attributes:
        single: 2×2 单格点幺正矩阵。
        n_sites: 格点数。
    """

    single: np.ndarray
    n_sites: int

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        tensor = amplitudes.reshape((2,) * self.n_sites)
        for axis in range(self.n_sites):
            tensor = np.moveaxis(np.tensordot(self.single, tensor, axes=([1], [axis])), 0, axis)
        return tensor.reshape(-1)

    def to_dense(self, max_sites: int = NUMERIC_DEFAULTS.DENSE_MAX_SITES) -> np.ndarray:
        if self.n_sites > max_sites:
            raise ValueError(
                f"dense rotation requested for {self.n_sites} sites (limit {max_sites})"
            )
        dense = np.ones((1, 1), dtype=np.complex128)
        for _ in range(self.n_sites):
            dense = np.kron(self.single, dense)
        return dense


def pulse_unitary(
    pulse: Pulse,
    n_sites: int,
    convention: SpinConvention = DEFAULT_CONVENTION,
) -> CollectiveRotation:
    """脉冲在 n 个格点上的集体旋转."""
    return CollectiveRotation(pulse.single_site_unitary(convention), n_sites)


@dataclass(frozen=True)
class PulseCycle:
    """M 个脉冲及其间的自由演化.

    自由演化顺序为 Δt/2, P_1, Δt, P_2, …, Δt, P_M, Δt/2。

    Attributes:
        pulses: 按时间顺序排列的脉冲 [P_1, …, P_M]。
        delta_t: 脉冲间自由演化时长 Δt (s)。
    """

    pulses: tuple[Pulse, ...]
    delta_t: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "pulses", tuple(self.pulses))
        if not self.pulses:
            raise ValueError("pulse cycle needs at least one pulse")
        if not self.delta_t > 0:
            raise ValueError(f"delta_t must be > 0, got {self.delta_t}")

    @classmethod
    def four_pulse(
        cls,
        delta_t: float,
        tau_p: float = 0.0,
        convention: SpinConvention = DEFAULT_CONVENTION,
    ) -> PulseCycle:
        """x, −x, y, −y 四个布洛赫转角为 π/2 的脉冲组成的循环.

        指数角 θ = π/(4·scale)，SpinHalf 下为 π/2，Pauli 下为 π/4。
        """
        angle = math.pi / (4.0 * convention.scale)
        axes = (PulseAxis.PLUS_X, PulseAxis.MINUS_X, PulseAxis.PLUS_Y, PulseAxis.MINUS_Y)
        return cls(tuple(Pulse(axis, angle, tau_p) for axis in axes), delta_t)

    @property
    def n_pulses(self) -> int:
        return len(self.pulses)

    @cached_property
    def free_weights(self) -> tuple[float, ...]:
        """M+1 段自由演化的权重 (以 Δt 为单位)."""
        inner = (1.0,) * (self.n_pulses - 1)
        return (EDGE_WEIGHT, *inner, EDGE_WEIGHT)

    @property
    def free_durations(self) -> tuple[float, ...]:
        return tuple(weight * self.delta_t for weight in self.free_weights)

    @property
    def free_time(self) -> float:
        """每个循环的自由演化总时长 M·Δt."""
        return self.n_pulses * self.delta_t

    @property
    def pulse_time(self) -> float:
        return sum(pulse.tau_p for pulse in self.pulses)

    @property
    def cycle_time(self) -> float:
        """墙钟循环时长 τ_c = MΔt + Σ τ_p."""
        return self.free_time + self.pulse_time

    def net_rotation(self, convention: SpinConvention = DEFAULT_CONVENTION) -> np.ndarray:
        """单格点上的 P_M … P_1."""
        total = np.eye(2, dtype=np.complex128)
        for pulse in self.pulses:
            total = pulse.single_site_unitary(convention) @ total
        return total

    def is_cyclic(
        self,
        convention: SpinConvention = DEFAULT_CONVENTION,
        tol: float = NUMERIC_DEFAULTS.CYCLIC_TOL,
    ) -> bool:
        """P_M … P_1 是否为单位算符."""
        return bool(np.allclose(self.net_rotation(convention), np.eye(2), atol=tol, rtol=0))
