"""长时间平台: 对角系综下单个格点的 ⟨σ_z⟩.

有效哈密顿量与总 z 磁化对易，按激发数扇区分块对角化 (13 个格点时
最大块为 1716 维)。时间平均把 ψ 投影到各能量本征子空间:
⟨σ_z⟩_∞ = Σ_E ⟨ψ|P_E σ_z P_E|ψ⟩，简并子空间整体投影。
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from loguru import logger
from scipy.linalg import eigh

from spinforge.algebra.pauli import OperatorSum, basis_indices
from spinforge.algebra.states import StateVector
from spinforge.model.topology import CARBON_SITE

DEGENERACY_TOL = 1e-9
AMPLITUDE_TOL = 1e-14


@dataclass(frozen=True)
class _Sector:
    indices: np.ndarray
    vectors: np.ndarray
    singles: np.ndarray
    degenerate: tuple[np.ndarray, ...]


def _energy_clusters(energies: np.ndarray, tol: float) -> list[np.ndarray]:
    breaks = np.flatnonzero(np.diff(energies) > tol) + 1
    return np.split(np.arange(energies.size), breaks)


class SectorSpectrum:
    """按激发数扇区缓存的本征分解.

    Attributes:
        hamiltonian: 守恒总 z 磁化的厄米哈密顿量 (rad/s)。
    """

    def __init__(self, hamiltonian: OperatorSum, degeneracy_tol: float = DEGENERACY_TOL) -> None:
        if not hamiltonian.is_hermitian():
            raise ValueError("plateau requires a Hermitian Hamiltonian")
        matrix = hamiltonian.to_sparse().tocoo()
        occupation = np.bitwise_count(basis_indices(hamiltonian.n_sites))
        leaking = (occupation[matrix.row] != occupation[matrix.col]) & (np.abs(matrix.data) > 0)
        if np.any(leaking):
            raise ValueError("Hamiltonian does not conserve the number of excitations")
        self.hamiltonian = hamiltonian
        self._matrix = matrix.tocsr()
        self._occupation = occupation
        self._degeneracy_tol = degeneracy_tol
        self._sectors: dict[int, _Sector] = {}

    def _sector(self, excitations: int) -> _Sector:
        if excitations not in self._sectors:
            indices = np.flatnonzero(self._occupation == excitations)
            block = self._matrix[indices, :][:, indices].toarray()
            energies, vectors = eigh(block)
            scale = max(1.0, float(np.abs(energies).max()))
            clusters = _energy_clusters(energies, self._degeneracy_tol * scale)
            singles = np.array([c[0] for c in clusters if c.size == 1], dtype=np.int64)
            degenerate = tuple(c for c in clusters if c.size > 1)
            logger.debug(
                f"Sector with {excitations} excitation(s): dim {indices.size}, "
                f"{len(degenerate)} degenerate cluster(s)"
            )
            self._sectors[excitations] = _Sector(indices, vectors, singles, degenerate)
        return self._sectors[excitations]

    def site_mz(self, psi: StateVector, site: int = CARBON_SITE) -> float:
        """ψ 在无限长时间平均下格点 site 的 ⟨σ_z⟩."""
        if psi.n_sites != self.hamiltonian.n_sites:
            raise ValueError(
                f"state has {psi.n_sites} sites but Hamiltonian acts on "
                f"{self.hamiltonian.n_sites}"
            )
        amplitudes = psi.amplitudes
        occupied = np.unique(self._occupation[np.abs(amplitudes) > AMPLITUDE_TOL])
        total = 0.0
        for excitations in occupied:
            sector = self._sector(int(excitations))
            z = 1.0 - 2.0 * ((sector.indices >> site) & 1)
            coeffs = sector.vectors.conj().T @ amplitudes[sector.indices]
            diagonal = z @ (np.abs(sector.vectors[:, sector.singles]) ** 2)
            total += float(diagonal @ (np.abs(coeffs[sector.singles]) ** 2))
            for cluster in sector.degenerate:
                projected = sector.vectors[:, cluster] @ coeffs[cluster]
                total += float(z @ (np.abs(projected) ** 2))
        return total


def plateau_mz(
    hamiltonian: OperatorSum | SectorSpectrum,
    members: StateVector | Sequence[StateVector],
    site: int = CARBON_SITE,
) -> float:
    """等权系综的长时间平均 ⟨σ_z⟩.

    Args:
        hamiltonian: 哈密顿量或已分解的扇区谱。
        members: 初态或比特串系综成员。
        site: 观测格点，缺省为碳。

    Returns:
        对角系综给出的平台值。
    """
    spectrum = (
        hamiltonian if isinstance(hamiltonian, SectorSpectrum) else SectorSpectrum(hamiltonian)
    )
    states = [members] if isinstance(members, StateVector) else list(members)
    if not states:
        raise ValueError("initial ensemble is empty")
    return float(np.mean([spectrum.site_mz(psi, site) for psi in states]))
