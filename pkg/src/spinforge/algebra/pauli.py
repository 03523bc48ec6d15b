"""Pauli 串与算符和.

所有哈密顿量和可观测量都表示为 Pauli 串的加权和。作用到态矢量时
不构造 2^n × 2^n 矩阵：每个 Pauli 串由翻转掩码和相位掩码描述，
相同翻转掩码的项预先合并成一个权重向量。

基矢约定：下标的第 k 位给出格点 k 的状态，|0⟩ 为 σ_z = +1 本征态。
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Literal

import numpy as np
from scipy import sparse

from spinforge.algebra.convention import SpinConvention, merge_conventions
from spinforge.constants import NUMERIC_DEFAULTS

PauliLabel = Literal["X", "Y", "Z"]
PAULI_LABELS: tuple[str, ...] = ("X", "Y", "Z")


@lru_cache(maxsize=8)
def basis_indices(n_sites: int) -> np.ndarray:
    """返回只读的基矢下标数组 [0, 2^n)."""
    idx = np.arange(1 << n_sites, dtype=np.int64)
    idx.flags.writeable = False
    return idx


@dataclass(frozen=True)
class PauliString:
    """系数乘以单格点 Pauli 因子的张量积.

    Attributes:
        coefficient: 复系数 (用于哈密顿量时单位为 rad/s)。
        factors: 按格点排序的 (格点, 'X'|'Y'|'Z') 元组，缺省格点为单位算符。
    """

    coefficient: complex
    factors: tuple[tuple[int, str], ...] = ()

    def __post_init__(self) -> None:
        sites = [site for site, _ in self.factors]
        if len(set(sites)) != len(sites):
            raise ValueError(f"duplicate site in Pauli factors {self.factors}")
        for site, label in self.factors:
            if site < 0:
                raise ValueError(f"negative site index {site}")
            if label not in PAULI_LABELS:
                raise ValueError(f"unknown Pauli label '{label}' on site {site}")
        object.__setattr__(self, "coefficient", complex(self.coefficient))
        object.__setattr__(self, "factors", tuple(sorted(self.factors)))

    @classmethod
    def from_map(cls, coefficient: complex, factors: Mapping[int, str]) -> PauliString:
        """从 {格点: 标签} 映射构造."""
        return cls(coefficient, tuple(factors.items()))

    @property
    def sites(self) -> tuple[int, ...]:
        return tuple(site for site, _ in self.factors)

    @property
    def max_site(self) -> int:
        return max(self.sites, default=-1)

    def masks(self) -> tuple[int, int, int]:
        """返回 (翻转掩码, 相位掩码, Y 因子个数).

        P|b⟩ = c · i^{n_Y} · (-1)^{popcount(b & 相位掩码)} |b ^ 翻转掩码⟩。
        """
        flip = phase = n_y = 0
        for site, label in self.factors:
            bit = 1 << site
            if label in ("X", "Y"):
                flip |= bit
            if label in ("Y", "Z"):
                phase |= bit
            if label == "Y":
                n_y += 1
        return flip, phase, n_y

    def scaled(self, factor: complex) -> PauliString:
        return PauliString(self.coefficient * factor, self.factors)

    def label(self, n_sites: int) -> str:
        """格点 0 在最左的字符串表示，如 'ZZII'."""
        chars = ["I"] * n_sites
        for site, label in self.factors:
            chars[site] = label
        return "".join(chars)

    def __str__(self) -> str:
        body = " ".join(f"{label}{site}" for site, label in self.factors) or "I"
        return f"({self.coefficient:.6g}) {body}"


def spin_term(
    coefficient: float,
    factors: Mapping[int, str],
    convention: SpinConvention,
) -> PauliString:
    """把 S/I 格点算符乘积转换成 Pauli 串，按约定吸收 1/2 因子."""
    return PauliString.from_map(coefficient * convention.product_scale(len(factors)), factors)


class _CompiledOperator:
    """按翻转掩码分组的无矩阵作用核.

    每组保存源基矢上的权重 w_f(b)，作用为 out[b ^ f] += w_f(b) ψ(b)。
    分组按掩码排序，累加顺序固定。
    """

    def __init__(self, terms: Iterable[PauliString], n_sites: int) -> None:
        self.n_sites = n_sites
        idx = basis_indices(n_sites)
        groups: dict[int, np.ndarray] = {}
        for term in terms:
            if term.coefficient == 0:
                continue
            flip, phase, n_y = term.masks()
            sign = 1.0 - 2.0 * (np.bitwise_count(idx & phase) & 1)
            weight = (term.coefficient * (1j**n_y)) * sign
            if flip in groups:
                groups[flip] += weight
            else:
                groups[flip] = weight.astype(np.complex128)
        self.groups: tuple[tuple[int, np.ndarray], ...] = tuple(sorted(groups.items()))

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        idx = basis_indices(self.n_sites)
        out = np.zeros_like(amplitudes, dtype=np.complex128)
        for flip, weight in self.groups:
            if flip == 0:
                out += weight * amplitudes
            else:
                out[idx ^ flip] += weight * amplitudes
        return out

    def to_sparse(self) -> sparse.csr_array:
        idx = basis_indices(self.n_sites)
        dim = 1 << self.n_sites
        if not self.groups:
            return sparse.csr_array((dim, dim), dtype=np.complex128)
        rows = np.concatenate([idx ^ flip for flip, _ in self.groups])
        cols = np.concatenate([idx for _ in self.groups])
        data = np.concatenate([weight for _, weight in self.groups])
        return sparse.coo_array((data, (rows, cols)), shape=(dim, dim)).tocsr()


@dataclass(frozen=True)
class OperatorSum:
    """Pauli 串的加权和.

    Attributes:
        terms: Pauli 串列表。
        n_sites: 所作用系统的格点数。
        convention: 构造时使用的自旋约定 (未知时为 None)。
    """

    terms: tuple[PauliString, ...]
    n_sites: int
    convention: SpinConvention | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.n_sites < 1:
            raise ValueError(f"n_sites must be >= 1, got {self.n_sites}")
        for term in self.terms:
            if term.max_site >= self.n_sites:
                raise ValueError(
                    f"term {term} acts on site {term.max_site} but n_sites={self.n_sites}"
                )

    @classmethod
    def zero(cls, n_sites: int, convention: SpinConvention | None = None) -> OperatorSum:
        return cls((), n_sites, convention)

    @classmethod
    def single(
        cls,
        n_sites: int,
        site: int,
        label: str,
        coefficient: complex = 1.0,
        convention: SpinConvention | None = None,
    ) -> OperatorSum:
        """单格点 Pauli 算符 coefficient·σ_label(site)."""
        return cls((PauliString.from_map(coefficient, {site: label}),), n_sites, convention)

    def _check_compatible(self, other: OperatorSum) -> SpinConvention | None:
        if other.n_sites != self.n_sites:
            raise ValueError(
                f"operator acts on {other.n_sites} sites but expected {self.n_sites}"
            )
        return merge_conventions(self.convention, other.convention)

    def __add__(self, other: OperatorSum) -> OperatorSum:
        convention = self._check_compatible(other)
        return OperatorSum(self.terms + other.terms, self.n_sites, convention)

    def __sub__(self, other: OperatorSum) -> OperatorSum:
        return self + (-1.0) * other

    def __mul__(self, factor: complex) -> OperatorSum:
        return OperatorSum(
            tuple(term.scaled(factor) for term in self.terms), self.n_sites, self.convention
        )

    __rmul__ = __mul__

    def __neg__(self) -> OperatorSum:
        return self * -1.0

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient_map(self) -> dict[tuple[tuple[int, str], ...], complex]:
        """合并同类项后的 {Pauli 因子: 系数}，按首次出现顺序."""
        merged: dict[tuple[tuple[int, str], ...], complex] = {}
        for term in self.terms:
            merged[term.factors] = merged.get(term.factors, 0j) + term.coefficient
        return merged

    def simplify(self, atol: float = 0.0) -> OperatorSum:
        """合并同类项并丢弃 |系数| <= atol 的项."""
        terms = tuple(
            PauliString(coefficient, factors)
            for factors, coefficient in self.coefficient_map().items()
            if abs(coefficient) > atol
        )
        return OperatorSum(terms, self.n_sites, self.convention)

    @property
    def scale(self) -> float:
        """系数绝对值之和，算符范数的上界."""
        return float(sum(abs(term.coefficient) for term in self.terms))

    def is_zero(self, atol: float = 0.0) -> bool:
        return not self.simplify(atol).terms

    def is_hermitian(self, tol: float = NUMERIC_DEFAULTS.HERMITIAN_TOL) -> bool:
        """Pauli 串线性无关，厄米当且仅当合并后系数均为实数."""
        bound = tol * max(1.0, self.scale)
        return all(abs(c.imag) <= bound for c in self.coefficient_map().values())

    def max_coefficient_difference(self, other: OperatorSum) -> float:
        """逐系数比较两个算符，返回最大绝对差."""
        self._check_compatible(other)
        left, right = self.coefficient_map(), other.coefficient_map()
        keys = set(left) | set(right)
        return max((abs(left.get(k, 0j) - right.get(k, 0j)) for k in keys), default=0.0)

    @cached_property
    def compiled(self) -> _CompiledOperator:
        return _CompiledOperator(self.terms, self.n_sites)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """对振幅数组作用 (无矩阵)."""
        if amplitudes.shape != (1 << self.n_sites,):
            raise ValueError(
                f"operator acts on {self.n_sites} sites but amplitudes have shape "
                f"{amplitudes.shape}"
            )
        return self.compiled.apply(amplitudes)

    def to_sparse(self) -> sparse.csr_array:
        return self.compiled.to_sparse()

    def to_dense(self, max_sites: int = NUMERIC_DEFAULTS.DENSE_MAX_SITES) -> np.ndarray:
        """稠密矩阵，仅允许小系统."""
        if self.n_sites > max_sites:
            raise ValueError(
                f"dense matrix requested for {self.n_sites} sites (limit {max_sites})"
            )
        return self.to_sparse().toarray()

    def __str__(self) -> str:
        return " + ".join(str(term) for term in self.terms) or "0"
