"""自旋算符约定.

SpinHalf: S_α = σ_α/2；Pauli: S_α = σ_α。同一次模拟只能使用一种约定。
"""

from __future__ import annotations

from enum import StrEnum


class SpinConvention(StrEnum):
    """格点算符 S_α、I_α 的归一化约定."""

    SPIN_HALF = "spin-half"
    PAULI = "pauli"

    @property
    def scale(self) -> float:
        """单格点算符相对 Pauli 矩阵的因子."""
        return 0.5 if self is SpinConvention.SPIN_HALF else 1.0

    def product_scale(self, n_factors: int) -> float:
        """n 个格点算符乘积的整体因子 (SpinHalf 下两体项为 1/4)."""
        return self.scale**n_factors


DEFAULT_CONVENTION = SpinConvention.SPIN_HALF


def merge_conventions(
    left: SpinConvention | None, right: SpinConvention | None
) -> SpinConvention | None:
    """合并两个算符的约定，不同约定混用时报错."""
    if left is None:
        return right
    if right is None or left is right:
        return left
    raise ValueError(f"cannot mix spin conventions '{left}' and '{right}' in one run")
