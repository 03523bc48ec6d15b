"""单比特过程层析: χ 矩阵重构、基变换与过程保真度.

ρ_f = Σ_mn χ_mn E_m ρ_i E_n†，默认基为 (I, S_x, iS_y, S_z)。
向量化按列堆叠: vec(A X B) = (Bᵀ ⊗ A) vec(X)。
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.linalg import eigh

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.states import DensityMatrix
from spinforge.constants import NUMERIC_DEFAULTS

Channel = Callable[[DensityMatrix], DensityMatrix]

_I = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    """四个 2×2 算符组成的基.

    Attributes:
        name: 基的名称。
        operators: (E_0, E_1, E_2, E_3)。
    """

    name: str
    operators: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.operators) != 4 or any(op.shape != (2, 2) for op in self.operators):
            raise ValueError("operator basis needs four 2x2 matrices")
        stacked = np.stack([op.reshape(-1) for op in self.operators], axis=1)
        if np.linalg.matrix_rank(stacked) != 4:
            raise ValueError(f"operators of basis '{self.name}' are linearly dependent")

    def coefficients(self, matrix: np.ndarray) -> np.ndarray:
        """matrix = Σ_m c_m E_m 的展开系数."""
        stacked = np.stack([op.reshape(-1) for op in self.operators], axis=1)
        return np.linalg.solve(stacked, np.asarray(matrix, dtype=np.complex128).reshape(-1))


def operator_basis(convention: SpinConvention = DEFAULT_CONVENTION) -> OperatorBasis:
    """(I, S_x, iS_y, S_z)，S = scale·σ."""
    s = convention.scale
    return OperatorBasis(f"I,Sx,iSy,Sz[{convention}]", (_I, s * _X, 1j * s * _Y, s * _Z))


def pauli_basis() -> OperatorBasis:
    """(I, X, Y, Z)."""
    return OperatorBasis("I,X,Y,Z", (_I, _X, _Y, _Z))


@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    """χ 矩阵及其算符基.

    Attributes:
        chi: 4×4 复矩阵。
        basis: 对应的算符基。
    """

    chi: np.ndarray
    basis: OperatorBasis

    def __post_init__(self) -> None:
        chi = np.array(self.chi, dtype=np.complex128, copy=True)
        if chi.shape != (4, 4):
            raise ValueError(f"chi must be 4x4, got {chi.shape}")
        chi.flags.writeable = False
        object.__setattr__(self, "chi", chi)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.chi))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.chi + self.chi.conj().T))

    def normalized(self) -> np.ndarray:
        """χ / Tr χ."""
        trace = self.trace
        if abs(trace) == 0:
            raise ValueError("chi has zero trace")
        return self.chi / trace

    def completeness_residual(self) -> float:
        """‖Σ_mn χ_mn E_n† E_m − I‖."""
        ops = self.basis.operators
        total = sum(
            self.chi[m, n] * (ops[n].conj().T @ ops[m]) for m in range(4) for n in range(4)
        )
        return float(np.linalg.norm(total - _I))

    def rank(self, tol: float = NUMERIC_DEFAULTS.CHI_TOL) -> int:
        """归一化 χ 中大于 tol 的本征值个数."""
        eigenvalues = np.linalg.eigvalsh(0.5 * (self.normalized() + self.normalized().conj().T))
        return int(np.sum(eigenvalues > tol))

    def validate(self, tol: float = NUMERIC_DEFAULTS.CHI_TOL) -> ProcessMatrix:
        """检查厄米、半正定与完备性，失败时抛出 ValueError."""
        if not np.allclose(self.chi, self.chi.conj().T, atol=tol, rtol=0):
            raise ValueError("chi is not Hermitian")
        smallest = float(self.eigenvalues().min())
        if smallest < -tol:
            raise ValueError(f"chi has negative eigenvalue {smallest:.3g}")
        residual = self.completeness_residual()
        if residual > tol:
            raise ValueError(f"chi violates completeness: residual {residual:.3g}")
        return self

    def apply(self, rho: DensityMatrix) -> DensityMatrix:
        """Σ_mn χ_mn E_m ρ E_n†."""
        ops = self.basis.operators
        out = sum(
            self.chi[m, n] * (ops[m] @ rho.elements @ ops[n].conj().T)
            for m in range(4)
            for n in range(4)
        )
        return DensityMatrix(out, 1)

    def in_basis(self, target: OperatorBasis) -> ProcessMatrix:
        return ProcessMatrix(change_basis(self.chi, self.basis, target), target)

    def to_pairs(self) -> list[list[list[float]]]:
        """按行展开的 [实部, 虚部] 嵌套列表."""
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.chi]


def _vec(matrix: np.ndarray) -> np.ndarray:
    return np.asarray(matrix).reshape(-1, order="F")


def _chi_design_matrix(basis: OperatorBasis) -> np.ndarray:
    ops = basis.operators
    return np.stack(
        [_vec(np.kron(ops[n].conj(), ops[m])) for m in range(4) for n in range(4)], axis=1
    )


def superoperator_to_chi(superop: np.ndarray, basis: OperatorBasis) -> np.ndarray:
    """由列堆叠超算符 S 求解 S = Σ χ_mn conj(E_n) ⊗ E_m."""
    solution = np.linalg.solve(_chi_design_matrix(basis), _vec(superop))
    return solution.reshape(4, 4)


def _probe_states() -> tuple[np.ndarray, ...]:
    plus = np.array([1, 1], dtype=np.complex128) / np.sqrt(2)
    plus_i = np.array([1, 1j], dtype=np.complex128) / np.sqrt(2)
    return (
        np.diag([1.0, 0.0]).astype(np.complex128),
        np.diag([0.0, 1.0]).astype(np.complex128),
        np.outer(plus, plus.conj()),
        np.outer(plus_i, plus_i.conj()),
    )


def random_density_matrix(rng: np.random.Generator) -> DensityMatrix:
    """Ginibre 随机单比特混态."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho), 1)


def reconstruct_chi(
    channel: Channel,
    basis: OperatorBasis | None = None,
    *,
    seed: int = 0,
    residual_tol: float = NUMERIC_DEFAULTS.CHANNEL_RESIDUAL_TOL,
) -> ProcessMatrix:
    """用 |0⟩、|1⟩、|+⟩、|+i⟩ 四个探测态重构 χ.

    非对角矩阵元由探测态线性组合得到:
    |0⟩⟨1| = |+⟩⟨+| + i|+i⟩⟨+i| − (1+i)/2 (|0⟩⟨0| + |1⟩⟨1|)。
    重构后在一个随机留出态上检验残差。

    Args:
        channel: 单比特信道。
        basis: 算符基，缺省为 (I, S_x, iS_y, S_z)。
        seed: 留出态的随机种子。
        residual_tol: 留出态残差容差。

    Returns:
        ProcessMatrix。

    Raises:
        ValueError: 信道不保迹或非线性 (留出态残差超过容差)。
    """
    basis = basis or operator_basis()
    outputs = []
    for probe in _probe_states():
        out = channel(DensityMatrix(probe, 1)).elements
        if abs(np.trace(out) - 1.0) > NUMERIC_DEFAULTS.CHI_TOL:
            raise ValueError(f"channel is not trace preserving: trace {np.trace(out):.6g}")
        outputs.append(out)
    e00, e11, plus, plus_i = outputs

    images = np.empty((2, 2, 2, 2), dtype=np.complex128)
    images[0, 0] = e00
    images[1, 1] = e11
    images[0, 1] = plus + 1j * plus_i - 0.5 * (1 + 1j) * (e00 + e11)
    images[1, 0] = plus - 1j * plus_i - 0.5 * (1 - 1j) * (e00 + e11)

    superop = np.empty((4, 4), dtype=np.complex128)
    for j in range(2):
        for k in range(2):
            superop[:, j + 2 * k] = _vec(images[j, k])
    process = ProcessMatrix(superoperator_to_chi(superop, basis), basis)

    held_out = random_density_matrix(np.random.default_rng(seed))
    residual = float(
        np.linalg.norm(channel(held_out).elements - process.apply(held_out).elements)
    )
    if residual > residual_tol:
        raise ValueError(f"channel is not linear: held-out residual {residual:.3g}")
    logger.debug(f"Reconstructed chi in basis {basis.name}, held-out residual {residual:.2e}")
    return process


def kraus_to_chi(
    kraus: Sequence[np.ndarray], basis: OperatorBasis | None = None
) -> ProcessMatrix:
    """K_i = Σ_m a_im E_m，χ = Σ_i a_i a_i†."""
    basis = basis or operator_basis()
    chi = np.zeros((4, 4), dtype=np.complex128)
    for k in kraus:
        a = basis.coefficients(k)
        chi += np.outer(a, a.conj())
    return ProcessMatrix(chi, basis)


def kraus_channel(kraus: Sequence[np.ndarray]) -> Channel:
    ops = tuple(np.asarray(k, dtype=np.complex128) for k in kraus)

    def channel(rho: DensityMatrix) -> DensityMatrix:
        return DensityMatrix(sum(k @ rho.elements @ k.conj().T for k in ops), 1)

    return channel


def unitary_channel(u: np.ndarray) -> Channel:
    return kraus_channel((u,))


def relaxation_kraus(target: int) -> tuple[np.ndarray, np.ndarray]:
    """完全弛豫到 |target⟩ 的 Kraus 算符 {|t⟩⟨t|, |t⟩⟨1−t|}."""
    if target not in (0, 1):
        raise ValueError(f"relaxation target must be 0 or 1, got {target}")
    keep = np.zeros((2, 2), dtype=np.complex128)
    move = np.zeros((2, 2), dtype=np.complex128)
    keep[target, target] = 1.0
    move[target, 1 - target] = 1.0
    return keep, move


def change_basis(chi: np.ndarray, source: OperatorBasis, target: OperatorBasis) -> np.ndarray:
    """E_m = Σ_a T_ma F_a 时 χ^F = Tᵀ χ T*."""
    transform = np.stack([target.coefficients(op) for op in source.operators])
    return transform.T @ chi @ transform.conj()


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    eigenvalues, vectors = eigh(0.5 * (matrix + matrix.conj().T))
    return (vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) @ vectors.conj().T


def process_fidelity(
    a: ProcessMatrix, b: ProcessMatrix, tol: float = NUMERIC_DEFAULTS.CHI_TOL
) -> float:
    """归一化 χ 的 Uhlmann 保真度 F = [Tr √(√a b √a)]².

    Raises:
        ValueError: 任一 χ 的负本征值低于 −tol，或两者基不同。
    """
    if a.basis.name != b.basis.name:
        raise ValueError(f"fidelity between bases '{a.basis.name}' and '{b.basis.name}'")
    left, right = a.normalized(), b.normalized()
    for name, chi in (("first", left), ("second", right)):
        smallest = float(np.linalg.eigvalsh(0.5 * (chi + chi.conj().T)).min())
        if smallest < -tol:
            raise ValueError(f"{name} chi is not positive semidefinite ({smallest:.3g})")
    root = _psd_sqrt(left)
    inner = np.linalg.eigvalsh(0.5 * (root @ right @ root + (root @ right @ root).conj().T))
    fidelity = float(np.sum(np.sqrt(np.clip(inner, 0.0, None))) ** 2)
    return float(np.clip(fidelity, 0.0, 1.0))
