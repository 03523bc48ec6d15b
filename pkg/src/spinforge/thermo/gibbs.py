"""带符号温度的吉布斯态、机器幺正与跃迁概率."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from scipy.linalg import eigh, expm
from scipy.special import softmax

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.pauli import OperatorSum
from spinforge.algebra.states import DensityMatrix
from spinforge.constants import BOLTZMANN, NUMERIC_DEFAULTS

_SIGMA = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
}


@dataclass(frozen=True)
class InverseTemperature:
    """带符号的逆温度 β = 1/k_B T.

    β < 0 表示布居反转 (负有效温度)，β = 0 表示无限温度。

    Attributes:
        beta: 逆温度 (1/J)。
    """

    beta: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta}")

    @classmethod
    def from_temperature(cls, kelvin: float) -> InverseTemperature:
        if kelvin == 0:
            raise ValueError("zero temperature has no finite beta")
        return cls(1.0 / (BOLTZMANN * kelvin))

    @classmethod
    def from_energy_ratio(cls, ratio: float, energy: float) -> InverseTemperature:
        """由无量纲 β·E 构造，E 通常取 ħω_1."""
        if not energy > 0:
            raise ValueError(f"reference energy must be > 0, got {energy}")
        return cls(ratio / energy)

    @property
    def is_negative(self) -> bool:
        return self.beta < 0

    @property
    def temperature(self) -> float:
        """温度 (K)，β = 0 时为 inf."""
        return math.inf if self.beta == 0 else 1.0 / (BOLTZMANN * self.beta)


def _single_site_dense(hamiltonian: OperatorSum) -> np.ndarray:
    if hamiltonian.n_sites != 1:
        raise ValueError(f"expected a single-site Hamiltonian, got {hamiltonian.n_sites} sites")
    if not hamiltonian.is_hermitian():
        raise ValueError("Hamiltonian is not Hermitian")
    return hamiltonian.to_dense()


def thermal_state(hamiltonian: OperatorSum, beta: InverseTemperature | float) -> DensityMatrix:
    """ρ = e^{−βH}/Z，β 可为负.

    用 softmax(−βE) 计算布居，避免大 |β| 时溢出。
    """
    beta = beta.beta if isinstance(beta, InverseTemperature) else float(beta)
    energies, vectors = eigh(_single_site_dense(hamiltonian))
    populations = softmax(-beta * energies)
    return DensityMatrix((vectors * populations) @ vectors.conj().T, 1)


def check_unitary(u: np.ndarray, tol: float = NUMERIC_DEFAULTS.UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"unitary must be square, got shape {u.shape}")
    deviation = float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))
    if deviation > tol:
        raise ValueError(f"matrix is not unitary: ||U^dag U - I|| = {deviation:.3g}")
    return u


def transition_probability(u: np.ndarray) -> float:
    """ξ = |⟨1|U|0⟩|²."""
    u = check_unitary(u)
    if u.shape != (2, 2):
        raise ValueError(f"transition probability needs a single-qubit unitary, got {u.shape}")
    return float(np.clip(abs(u[1, 0]) ** 2, 0.0, 1.0))


class MachineUnitary(StrEnum):
    """机器幺正冲程."""

    UX = "Ux"
    UY = "Uy"
    UPI = "Upi"
    UI = "UI"


# (轴, 指数中的角度)，U = exp(−i angle S_axis)
_MACHINE_ROTATIONS: dict[MachineUnitary, tuple[str, float]] = {
    MachineUnitary.UX: ("X", math.pi / 2),
    MachineUnitary.UY: ("Y", math.pi / 2),
    MachineUnitary.UPI: ("X", math.pi),
    MachineUnitary.UI: ("Y", 2 * math.pi),
}


def machine_unitary(
    name: MachineUnitary | str, convention: SpinConvention = DEFAULT_CONVENTION
) -> np.ndarray:
    """U_x、U_y、U_π、U_I 的 2×2 矩阵.

    SpinHalf 下 ξ 分别为 1/2、1/2、1、0；U_I = −𝕀。
    """
    axis, angle = _MACHINE_ROTATIONS[MachineUnitary(name)]
    return expm(-1j * angle * convention.scale * _SIGMA[axis])
