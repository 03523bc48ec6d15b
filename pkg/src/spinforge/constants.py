"""spinforge 常量定义模块.

集中管理数值容差、物理常数和实验默认参数.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Final

# 约化普朗克常数 (J·s)
HBAR: Final[float] = 1.054_571_817e-34

# 玻尔兹曼常数 (J/K)
BOLTZMANN: Final[float] = 1.380_649e-23


@dataclass(frozen=True)
class NumericDefaults:
    """数值容差与算法阈值."""

    HERMITIAN_TOL: float = 1e-10
    TRACE_TOL: float = 1e-10
    NORM_TOL: float = 1e-10
    PSD_TOL: float = 1e-10
    IMAG_TOL: float = 1e-10
    UNITARY_TOL: float = 1e-10
    CYCLIC_TOL: float = 1e-12
    GIBBS_COMMUTATOR_TOL: float = 1e-8
    ENTANGLEMENT_PSD_TOL: float = 1e-8
    CHI_TOL: float = 1e-8
    CHANNEL_RESIDUAL_TOL: float = 1e-10
    XI_ZERO_TOL: float = 1e-12
    DENSE_MAX_SITES: int = 12
    MAX_KEPT_SITES: int = 3
    KRYLOV_TOL: float = 1e-10
    KRYLOV_MAX_DIM: int = 40


@dataclass(frozen=True)
class ReferenceDefaults:
    """参考实验参数 (有效耦合、脉冲宽度、观测窗口)."""

    J_CH_EFF: float = 550.0
    J_HH_EFF: float = 980.0
    TAU_P: float = 9.89e-6
    DELTA_TS: tuple[float, ...] = (15.10e-6, 1.228e-6, 0.10e-6)
    N_CYCLES: tuple[int, ...] = (100, 225, 250)
    WINDOW: float = 10e-3
    EFFECTIVE_SAMPLES: int = 500
    ENSEMBLE_SAMPLES: int = 32
    # 11.7 T 下 13C 的拉莫尔频率
    OMEGA1: float = 2.0 * math.pi * 125.7e6


NUMERIC_DEFAULTS = NumericDefaults()
REFERENCE_DEFAULTS = ReferenceDefaults()
