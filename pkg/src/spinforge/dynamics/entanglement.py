"""两比特纠缠度量: Wootters 并发度与形成纠缠."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import entr

from spinforge.algebra.states import DensityMatrix
from spinforge.constants import NUMERIC_DEFAULTS

_SIGMA_YY = np.kron(
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
)


def _two_qubit_elements(rho: DensityMatrix | np.ndarray) -> np.ndarray:
    elements = rho.elements if isinstance(rho, DensityMatrix) else np.asarray(rho, np.complex128)
    if elements.shape != (4, 4):
        raise ValueError(f"two-qubit density matrix must be 4x4, got {elements.shape}")
    smallest = float(np.linalg.eigvalsh(0.5 * (elements + elements.conj().T)).min())
    if smallest < -NUMERIC_DEFAULTS.ENTANGLEMENT_PSD_TOL:
        raise ValueError(f"non-physical density matrix: eigenvalue {smallest:.3g}")
    return elements


def concurrence(rho: DensityMatrix | np.ndarray) -> float:
    """Wootters 并发度 C = max(0, λ1 − λ2 − λ3 − λ4).

    λ_i 为 ρ (σy⊗σy) ρ* (σy⊗σy) 本征值的平方根，按降序排列。

    Raises:
        ValueError: ρ 不是 4×4 或存在低于 −1e-8 的本征值。
    """
    elements = _two_qubit_elements(rho)
    spin_flipped = _SIGMA_YY @ elements.conj() @ _SIGMA_YY
    # 取绝对值吸收数值上的微小负值
    eigenvalues = np.abs(np.linalg.eigvals(elements @ spin_flipped).real)
    lambdas = np.sort(np.sqrt(eigenvalues))[::-1]
    value = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]
    return float(np.clip(value, 0.0, 1.0))


def binary_entropy(p: float) -> float:
    """以 2 为底的二元熵 h(p)."""
    return float((entr(p) + entr(1.0 - p)) / math.log(2.0))


def eof_from_concurrence(c: float) -> float:
    x = 0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c)))
    return float(np.clip(binary_entropy(x), 0.0, 1.0))


def eof(rho: DensityMatrix | np.ndarray) -> float:
    """形成纠缠 EoF = h((1 + √(1 − C²))/2)，取值 [0, 1]."""
    return eof_from_concurrence(concurrence(rho))
