"""薛定谔传播子 exp(-iHt).

小系统 (n <= 12) 用稠密本征分解，大系统用带完全重正交的 Lanczos
Krylov 近似。H 以 rad/s 为单位，ħ 已吸收进 H。
"""

from __future__ import annotations

from enum import StrEnum

import numpy as np
from loguru import logger
from scipy.linalg import eigh, eigh_tridiagonal

from spinforge.algebra.pauli import OperatorSum
from spinforge.constants import NUMERIC_DEFAULTS

BREAKDOWN_TOL = 1e-14
MAX_SUBSTEP_HALVINGS = 20


class EvolutionMethod(StrEnum):
    """时间演化方法."""

    AUTO = "auto"
    DENSE = "dense"
    KRYLOV = "krylov"


def _krylov_step(
    op: OperatorSum,
    v: np.ndarray,
    t: float,
    tol: float,
    max_dim: int,
) -> tuple[np.ndarray | None, int]:
    """单步 Lanczos 近似 exp(-iHt)v，未收敛时返回 (None, max_dim)."""
    beta0 = float(np.linalg.norm(v))
    if beta0 == 0.0:
        return np.zeros_like(v), 0

    basis = np.empty((max_dim + 1, v.shape[0]), dtype=np.complex128)
    basis[0] = v / beta0
    alphas: list[float] = []
    betas: list[float] = []

    for j in range(max_dim):
        w = op.apply(basis[j])
        alpha = float(np.vdot(basis[j], w).real)
        w -= alpha * basis[j]
        if j > 0:
            w -= betas[-1] * basis[j - 1]
        # 完全重正交，m <= 40 时开销可忽略
        w -= basis[: j + 1].T @ (basis[: j + 1].conj() @ w)
        beta = float(np.linalg.norm(w))
        alphas.append(alpha)
        m = j + 1

        if m == 1:
            evals = np.array(alphas)
            evecs = np.ones((1, 1))
        else:
            evals, evecs = eigh_tridiagonal(np.array(alphas), np.array(betas))
        coeffs = evecs @ (np.exp(-1j * evals * t) * evecs[0])
        error = beta0 * beta * abs(coeffs[-1])

        if beta < BREAKDOWN_TOL or error < tol:
            logger.trace(f"Krylov converged: dim={m}, error={error:.2e}")
            return beta0 * (basis[:m].T @ coeffs), m

        betas.append(beta)
        basis[j + 1] = w / beta

    return None, max_dim


def krylov_expmv(
    op: OperatorSum,
    v: np.ndarray,
    t: float,
    tol: float = NUMERIC_DEFAULTS.KRYLOV_TOL,
    max_dim: int = NUMERIC_DEFAULTS.KRYLOV_MAX_DIM,
) -> np.ndarray:
    """exp(-iHt)v 的自适应 Krylov 近似.

    子空间维数达到 max_dim 仍未收敛时把时间步二分，直到收敛。

    Args:
        op: 厄米哈密顿量 (rad/s)。
        v: 初始振幅。
        t: 演化时间 (s)。
        tol: 每个子步的残差容差。
        max_dim: 最大子空间维数。

    Returns:
        演化后的振幅。
    """
    if t == 0.0:
        return v.copy()

    for halvings in range(MAX_SUBSTEP_HALVINGS + 1):
        n_steps = 1 << halvings
        dt = t / n_steps
        current = v
        for _ in range(n_steps):
            result, _dim = _krylov_step(op, current, dt, tol / n_steps, max_dim)
            if result is None:
                break
            current = result
        else:
            if halvings:
                logger.debug(f"Krylov needed {n_steps} substeps for t={t:.3e}")
            return current
    raise RuntimeError(f"Krylov propagation did not converge for t={t:.3e}")


class TimeEvolution:
    """给定哈密顿量的传播子，缓存本征分解和稠密传播矩阵.

    Attributes:
        op: 哈密顿量。
        method: 解析后的方法 (dense 或 krylov)。
    """

    def __init__(
        self,
        op: OperatorSum,
        method: EvolutionMethod | str = EvolutionMethod.AUTO,
        dense_max_sites: int = NUMERIC_DEFAULTS.DENSE_MAX_SITES,
        krylov_tol: float = NUMERIC_DEFAULTS.KRYLOV_TOL,
        krylov_max_dim: int = NUMERIC_DEFAULTS.KRYLOV_MAX_DIM,
    ) -> None:
        if not op.is_hermitian():
            raise ValueError("time evolution requires a Hermitian Hamiltonian")
        self.op = op
        method = EvolutionMethod(method)
        if method is EvolutionMethod.AUTO:
            method = (
                EvolutionMethod.DENSE
                if op.n_sites <= dense_max_sites
                else EvolutionMethod.KRYLOV
            )
        self.method = method
        self.krylov_tol = krylov_tol
        self.krylov_max_dim = krylov_max_dim
        self._eig: tuple[np.ndarray, np.ndarray] | None = None
        self._unitaries: dict[float, np.ndarray] = {}
        logger.debug(f"TimeEvolution on {op.n_sites} sites using {self.method}")

    @property
    def n_sites(self) -> int:
        return self.op.n_sites

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """稠密本征分解 (E, V)，首次调用时计算."""
        if self._eig is None:
            dense = self.op.to_sparse().toarray()
            self._eig = eigh(dense)
        return self._eig

    def unitary(self, t: float) -> np.ndarray:
        """稠密传播矩阵 exp(-iHt)，按 t 缓存."""
        if t not in self._unitaries:
            energies, vectors = self.eigensystem()
            self._unitaries[t] = (vectors * np.exp(-1j * energies * t)) @ vectors.conj().T
        return self._unitaries[t]

    def evolve(self, amplitudes: np.ndarray, t: float) -> np.ndarray:
        """返回 exp(-iHt) 作用后的振幅."""
        if self.method is EvolutionMethod.DENSE:
            energies, vectors = self.eigensystem()
            return vectors @ (np.exp(-1j * energies * t) * (vectors.conj().T @ amplitudes))
        return krylov_expmv(self.op, amplitudes, t, self.krylov_tol, self.krylov_max_dim)

    def step(self, amplitudes: np.ndarray, t: float) -> np.ndarray:
        """重复使用同一时长的步进；稠密模式下复用缓存的传播矩阵."""
        if self.method is EvolutionMethod.DENSE:
            return self.unitary(t) @ amplitudes
        return krylov_expmv(self.op, amplitudes, t, self.krylov_tol, self.krylov_max_dim)
