"""翻转坐标系与零阶平均哈密顿量.

集体四分之一圈旋转把每个 Pauli 因子映射为另一个 Pauli 因子乘 ±1，
因此 T_j† H T_j 可以逐项闭式计算，不需要稠密矩阵。
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from loguru import logger

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.pauli import OperatorSum, PauliString
from spinforge.pulses.cycle import Pulse, PulseCycle

_UNIT = {"X": (1, 0, 0), "Y": (0, 1, 0), "Z": (0, 0, 1)}
_QUARTER_TRIG = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}
QUARTER_TURN_TOL = 1e-9


def _cross(a: tuple[int, int, int], b: tuple[int, int, int]) -> tuple[int, int, int]:
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def quarter_turns(pulse: Pulse, convention: SpinConvention = DEFAULT_CONVENTION) -> int:
    """脉冲的布洛赫转角以 π/2 为单位的整数倍 (模 4)."""
    turns = pulse.bloch_angle(convention) / (math.pi / 2)
    rounded = round(turns)
    if abs(turns - rounded) > QUARTER_TURN_TOL:
        raise ValueError(
            f"closed-form conjugation needs quarter-turn rotations, got {turns:.6g} quarter turns"
        )
    return rounded % 4


def conjugation_table(
    pulse: Pulse, convention: SpinConvention = DEFAULT_CONVENTION
) -> dict[str, tuple[int, str]]:
    """单格点海森堡映射 P† σ_b P = sign · σ_c，返回 {b: (sign, c)}.

    P 绕 n 转 α 时，P† σ P 对应把 e_b 绕 n 转 −α (Rodrigues 公式，整数运算)。
    """
    cos_a, sin_a = _QUARTER_TRIG[(-quarter_turns(pulse, convention)) % 4]
    n = _UNIT[pulse.axis.label]
    table: dict[str, tuple[int, str]] = {}
    for label, v in _UNIT.items():
        n_cross_v = _cross(n, v)
        n_dot_v = sum(a * b for a, b in zip(n, v, strict=True))
        rotated = tuple(
            cos_a * v[k] + sin_a * n_cross_v[k] + (1 - cos_a) * n_dot_v * n[k] for k in range(3)
        )
        (k,) = [k for k in range(3) if rotated[k] != 0]
        table[label] = (rotated[k], "XYZ"[k])
    return table


def conjugate_string(
    term: PauliString, pulse: Pulse, convention: SpinConvention = DEFAULT_CONVENTION
) -> PauliString:
    """P† term P，P 为集体脉冲；结果仍是单个 Pauli 串."""
    table = conjugation_table(pulse, convention)
    sign = 1
    factors: list[tuple[int, str]] = []
    for site, label in term.factors:
        factor_sign, new_label = table[label]
        sign *= factor_sign
        factors.append((site, new_label))
    return PauliString(term.coefficient * sign, tuple(factors))


def conjugate(
    op: OperatorSum, pulse: Pulse, convention: SpinConvention = DEFAULT_CONVENTION
) -> OperatorSum:
    """逐项计算 P† op P."""
    return OperatorSum(
        tuple(conjugate_string(term, pulse, convention) for term in op.terms),
        op.n_sites,
        op.convention,
    )


@dataclass(frozen=True, eq=False)
class TogglingFrame:
    """第 j 段自由演化所在的翻转坐标系.

    Attributes:
        index: 段序号 j (0 … M)。
        applied: 已作用的脉冲 P_1 … P_j。
        weight: 段时长 Δt_j (s)。
        hamiltonian: H̃_j = T_j† H T_j。
    """

    index: int
    applied: tuple[Pulse, ...]
    weight: float
    hamiltonian: OperatorSum

    def transform(self, convention: SpinConvention = DEFAULT_CONVENTION) -> np.ndarray:
        """单格点上的 T_j = P_j … P_1."""
        total = np.eye(2, dtype=np.complex128)
        for pulse in self.applied:
            total = pulse.single_site_unitary(convention) @ total
        return total


def toggling_frames(
    hamiltonian: OperatorSum,
    cycle: PulseCycle,
    convention: SpinConvention = DEFAULT_CONVENTION,
) -> list[TogglingFrame]:
    """计算 M+1 个翻转坐标系哈密顿量及其时长."""
    frames: list[TogglingFrame] = []
    for j, duration in enumerate(cycle.free_durations):
        applied = cycle.pulses[:j]
        frame_h = hamiltonian
        # T_j† H T_j = P_1† … P_j† H P_j … P_1，先作用最内层的 P_j
        for pulse in reversed(applied):
            frame_h = conjugate(frame_h, pulse, convention)
        frames.append(TogglingFrame(j, applied, duration, frame_h))
    return frames


def average_hamiltonian_zeroth(
    hamiltonian: OperatorSum,
    cycle: PulseCycle,
    convention: SpinConvention = DEFAULT_CONVENTION,
) -> OperatorSum:
    """Magnus 展开零阶项 H̄_0 = (1/t) Σ_j Δt_j H̃_j.

    对参考四脉冲循环，各坐标系化为 {H: 2Δt, P_1†HP_1: Δt, P_3†HP_3: Δt}。

    Raises:
        ValueError: 脉冲序列不是循环的 (零阶平均失效)。
    """
    if not cycle.is_cyclic(convention):
        raise ValueError("average Hamiltonian needs a cyclic pulse sequence (P_M…P_1 = I)")

    frames = toggling_frames(hamiltonian, cycle, convention)
    # 用 Δt 为单位的权重归一化，避免 Δt 的舍入误差
    total_weight = sum(cycle.free_weights)
    average = OperatorSum.zero(hamiltonian.n_sites, hamiltonian.convention)
    for frame, weight in zip(frames, cycle.free_weights, strict=True):
        average = average + (weight / total_weight) * frame.hamiltonian
    result = average.simplify()
    logger.debug(
        f"Zeroth-order average over {len(frames)} frames: {len(hamiltonian)} -> {len(result)} terms"
    )
    return result
