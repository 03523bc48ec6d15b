"""态矢量、密度矩阵与约化.

StateVector 表示 2^n 维纯态振幅；DensityMatrix 只用于 1-3 个格点的
小系统混态。两者构造后不可变。
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from spinforge.algebra.pauli import OperatorSum
from spinforge.constants import NUMERIC_DEFAULTS

_PAULI_2X2 = {
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128, copy=True)
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class StateVector:
    """n 格点纯态.

    Attributes:
        amplitudes: 长度 2^n 的复振幅，下标第 k 位为格点 k 的状态。
        n_sites: 格点数。
    """

    amplitudes: np.ndarray
    n_sites: int

    def __post_init__(self) -> None:
        amplitudes = _frozen(self.amplitudes)
        if amplitudes.shape != (1 << self.n_sites,):
            raise ValueError(
                f"amplitudes of shape {amplitudes.shape} do not match {self.n_sites} sites"
            )
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def basis(cls, bits: Sequence[int]) -> StateVector:
        """计算基矢 |b_0 b_1 ... b_{n-1}⟩，bits[k] 为格点 k 的状态."""
        n_sites = len(bits)
        index = 0
        for site, bit in enumerate(bits):
            if bit not in (0, 1):
                raise ValueError(f"site {site} has invalid bit {bit}")
            index |= bit << site
        amplitudes = np.zeros(1 << n_sites, dtype=np.complex128)
        amplitudes[index] = 1.0
        return cls(amplitudes, n_sites)

    @classmethod
    def product(cls, site_states: Sequence[np.ndarray]) -> StateVector:
        """单格点二维态的张量积，site_states[k] 属于格点 k."""
        amplitudes = np.ones(1, dtype=np.complex128)
        for local in site_states:
            local = np.asarray(local, dtype=np.complex128)
            if local.shape != (2,):
                raise ValueError(f"single-site state must have shape (2,), got {local.shape}")
            # 高位格点在 kron 左侧
            amplitudes = np.kron(local, amplitudes)
        return cls(amplitudes, len(site_states))

    @property
    def dim(self) -> int:
        return 1 << self.n_sites

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NUMERIC_DEFAULTS.NORM_TOL) -> bool:
        return abs(self.norm - 1.0) < tol

    def normalized(self) -> StateVector:
        norm = self.norm
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amplitudes / norm, self.n_sites)

    def with_amplitudes(self, amplitudes: np.ndarray) -> StateVector:
        return StateVector(amplitudes, self.n_sites)

    def flipped(self) -> StateVector:
        """所有格点做 σ_x 翻转后的态."""
        return StateVector(self.amplitudes[::-1], self.n_sites)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """小系统密度矩阵 (1-3 个格点).

    Attributes:
        elements: 2^m × 2^m 复矩阵。
        n_sites: 格点数 m。
    """

    elements: np.ndarray
    n_sites: int

    def __post_init__(self) -> None:
        elements = _frozen(self.elements)
        dim = 1 << self.n_sites
        if elements.shape != (dim, dim):
            raise ValueError(
                f"density matrix of shape {elements.shape} does not match {self.n_sites} sites"
            )
        object.__setattr__(self, "elements", elements)

    @classmethod
    def from_state(cls, psi: StateVector) -> DensityMatrix:
        return cls(np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.n_sites)

    @classmethod
    def maximally_mixed(cls, n_sites: int = 1) -> DensityMatrix:
        dim = 1 << n_sites
        return cls(np.eye(dim) / dim, n_sites)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.elements))

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(0.5 * (self.elements + self.elements.conj().T))

    def validate(
        self,
        tol: float = NUMERIC_DEFAULTS.TRACE_TOL,
        psd_tol: float = NUMERIC_DEFAULTS.PSD_TOL,
    ) -> DensityMatrix:
        """检查厄米性、单位迹和半正定性，失败时抛出 ValueError."""
        if not np.allclose(self.elements, self.elements.conj().T, atol=tol, rtol=0):
            raise ValueError("density matrix is not Hermitian")
        if abs(self.trace - 1.0) > tol:
            raise ValueError(f"density matrix trace {self.trace:.3g} differs from 1")
        smallest = float(self.eigenvalues().min())
        if smallest < -psd_tol:
            raise ValueError(f"density matrix has negative eigenvalue {smallest:.3g}")
        return self

    def expectation(self, operator: np.ndarray) -> float:
        """Tr[ρ A] 的实部，A 为同维厄米矩阵."""
        value = complex(np.trace(self.elements @ operator))
        return value.real

    def bloch_vector(self) -> tuple[float, float, float]:
        """单格点态的 (⟨σ_x⟩, ⟨σ_y⟩, ⟨σ_z⟩)."""
        if self.n_sites != 1:
            raise ValueError(f"Bloch vector needs a single site, got {self.n_sites}")
        return (
            self.expectation(_PAULI_2X2["X"]),
            self.expectation(_PAULI_2X2["Y"]),
            self.expectation(_PAULI_2X2["Z"]),
        )

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.elements)).copy()


def apply_operator(op: OperatorSum, psi: StateVector) -> StateVector:
    """返回 op·ψ，不构造稠密矩阵."""
    if op.n_sites != psi.n_sites:
        raise ValueError(f"operator acts on {op.n_sites} sites but state has {psi.n_sites}")
    return StateVector(op.apply(psi.amplitudes), psi.n_sites)


def expectation(psi: StateVector, op: OperatorSum) -> float:
    """⟨ψ|op|ψ⟩，op 必须厄米；虚部残差超过容差时报错."""
    if op.n_sites != psi.n_sites:
        raise ValueError(f"operator acts on {op.n_sites} sites but state has {psi.n_sites}")
    if not op.is_hermitian():
        raise ValueError("expectation value requested for a non-Hermitian operator")
    value = complex(np.vdot(psi.amplitudes, op.apply(psi.amplitudes)))
    bound = NUMERIC_DEFAULTS.IMAG_TOL * max(1.0, op.scale)
    if abs(value.imag) > bound:
        raise ValueError(f"imaginary residue {value.imag:.3g} exceeds tolerance {bound:.3g}")
    return value.real


def _check_keep(keep: Sequence[int], n_sites: int) -> tuple[int, ...]:
    keep = tuple(int(site) for site in keep)
    if not keep:
        raise ValueError("partial trace needs at least one kept site")
    if len(keep) > NUMERIC_DEFAULTS.MAX_KEPT_SITES:
        raise ValueError(
            f"cannot keep {len(keep)} sites (limit {NUMERIC_DEFAULTS.MAX_KEPT_SITES})"
        )
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate site in keep set {keep}")
    for site in keep:
        if not 0 <= site < n_sites:
            raise ValueError(f"kept site {site} out of range for {n_sites} sites")
    return keep


def _axis(site: int, n_sites: int) -> int:
    # C 序 reshape 后第 0 轴是最高位格点
    return n_sites - 1 - site


def reduced_amplitude_matrix(
    amplitudes: np.ndarray, n_sites: int, keep: Sequence[int]
) -> np.ndarray:
    """把振幅重排为 (2^m, 2^{n-m}) 矩阵，行下标第 j 位对应 keep[j]."""
    keep = tuple(keep)
    traced = [site for site in range(n_sites) if site not in keep]
    order = [_axis(site, n_sites) for site in reversed(keep)]
    order += [_axis(site, n_sites) for site in reversed(traced)]
    tensor = amplitudes.reshape((2,) * n_sites).transpose(order)
    return tensor.reshape(1 << len(keep), -1)


def partial_trace(state: StateVector | DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """约化到 keep 中的格点，输出下标第 j 位对应 keep[j]."""
    n_sites = state.n_sites
    keep = _check_keep(keep, n_sites)
    m = len(keep)

    if isinstance(state, StateVector):
        block = reduced_amplitude_matrix(state.amplitudes, n_sites, keep)
        return DensityMatrix(block @ block.conj().T, m)

    traced = [site for site in range(n_sites) if site not in keep]
    row_axes = [_axis(site, n_sites) for site in reversed(keep)]
    row_axes += [_axis(site, n_sites) for site in reversed(traced)]
    col_axes = [n_sites + axis for axis in row_axes]
    tensor = state.elements.reshape((2,) * (2 * n_sites)).transpose(row_axes + col_axes)
    rest = 1 << (n_sites - m)
    tensor = tensor.reshape(1 << m, rest, 1 << m, rest)
    return DensityMatrix(np.einsum("ajbj->ab", tensor), m)


def apply_local(psi: StateVector, site: int, matrix: np.ndarray) -> StateVector:
    """把 2×2 矩阵作用到单个格点上."""
    matrix = np.asarray(matrix, dtype=np.complex128)
    if matrix.shape != (2, 2):
        raise ValueError(f"local operator must be 2x2, got {matrix.shape}")
    if not 0 <= site < psi.n_sites:
        raise ValueError(f"site {site} out of range for {psi.n_sites} sites")
    axis = _axis(site, psi.n_sites)
    tensor = psi.amplitudes.reshape((2,) * psi.n_sites)
    tensor = np.moveaxis(np.tensordot(matrix, tensor, axes=([1], [axis])), 0, axis)
    return StateVector(tensor.reshape(-1), psi.n_sites)
