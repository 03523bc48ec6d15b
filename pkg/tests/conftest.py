"""共享夹具与稠密矩阵参照实现.

参照实现只在测试中使用：用 Kronecker 积逐项构造 2^n × 2^n 矩阵，
格点 k 对应下标第 k 位 (最高位格点位于 kron 最左侧)。
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence

import numpy as np
import pytest
from scipy.linalg import expm

from spinforge.algebra.pauli import OperatorSum, PauliString
from spinforge.pulses.cycle import PulseCycle

PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def kron_sites(local: Mapping[int, np.ndarray], n_sites: int) -> np.ndarray:
    """⊗_k local[k]，缺省格点为单位矩阵."""
    dense = np.ones((1, 1), dtype=np.complex128)
    for site in range(n_sites):
        dense = np.kron(local.get(site, PAULI["I"]), dense)
    return dense


def dense_string(term: PauliString, n_sites: int) -> np.ndarray:
    return term.coefficient * kron_sites(
        {site: PAULI[label] for site, label in term.factors}, n_sites
    )


def dense_operator(op: OperatorSum) -> np.ndarray:
    dim = 1 << op.n_sites
    total = np.zeros((dim, dim), dtype=np.complex128)
    for term in op.terms:
        total += dense_string(term, op.n_sites)
    return total


def dense_partial_trace(rho: np.ndarray, n_sites: int, keep: Sequence[int]) -> np.ndarray:
    """逐矩阵元求和的约化密度矩阵，输出下标第 j 位对应 keep[j]."""
    m = len(keep)
    out = np.zeros((1 << m, 1 << m), dtype=np.complex128)
    traced = [site for site in range(n_sites) if site not in keep]

    def index(reduced: int, rest: int) -> int:
        full = 0
        for j, site in enumerate(keep):
            full |= ((reduced >> j) & 1) << site
        for j, site in enumerate(traced):
            full |= ((rest >> j) & 1) << site
        return full

    for a in range(1 << m):
        for b in range(1 << m):
            out[a, b] = sum(
                rho[index(a, r), index(b, r)] for r in range(1 << len(traced))
            )
    return out


def dense_cycle(hamiltonian: OperatorSum, cycle: PulseCycle, convention) -> np.ndarray:
    """由 expm 与 kron 逐段相乘的循环传播子."""
    h = dense_operator(hamiltonian)
    n = hamiltonian.n_sites
    durations = cycle.free_durations
    total = expm(-1j * h * durations[0])
    for pulse, duration in zip(cycle.pulses, durations[1:], strict=True):
        single = pulse.single_site_unitary(convention)
        total = kron_sites(dict.fromkeys(range(n), single), n) @ total
        total = expm(-1j * h * duration) @ total
    return total


def random_state(rng: np.random.Generator, n_sites: int) -> np.ndarray:
    amps = rng.normal(size=1 << n_sites) + 1j * rng.normal(size=1 << n_sites)
    return amps / np.linalg.norm(amps)


def random_operator(rng: np.random.Generator, n_sites: int, n_terms: int = 6) -> OperatorSum:
    terms = []
    for _ in range(n_terms):
        sites = rng.choice(n_sites, size=int(rng.integers(1, min(n_sites, 3) + 1)), replace=False)
        factors = {int(site): str(rng.choice(["X", "Y", "Z"])) for site in sites}
        terms.append(PauliString.from_map(float(rng.normal()), factors))
    return OperatorSum(tuple(terms), n_sites)


@pytest.fixture
def rng() -> np.random.Generator:
    """固定种子的随机数发生器."""
    return np.random.default_rng(20240601)
