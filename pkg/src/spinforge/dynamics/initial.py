"""初态: 纯积态和无限温度热库的比特串系综."""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from loguru import logger

from spinforge.algebra.states import StateVector
from spinforge.constants import REFERENCE_DEFAULTS
from spinforge.model.topology import CARBON_SITE, ChainTopology


class SiteState(StrEnum):
    """单个自旋的初始状态."""

    GROUND = "ground"
    EXCITED = "excited"
    MIXED = "maximally-mixed"

    @property
    def bit(self) -> int:
        if self is SiteState.MIXED:
            raise ValueError("maximally-mixed site has no definite bit")
        return 0 if self is SiteState.GROUND else 1


@dataclass(frozen=True)
class InitialState:
    """碳与热库的初态.

    Attributes:
        carbon: 碳自旋状态。
        bath: 所有氢自旋的共同状态。
    """

    carbon: SiteState = SiteState.EXCITED
    bath: SiteState = SiteState.GROUND

    def __post_init__(self) -> None:
        object.__setattr__(self, "carbon", SiteState(self.carbon))
        object.__setattr__(self, "bath", SiteState(self.bath))

    @property
    def is_pure(self) -> bool:
        return SiteState.MIXED not in (self.carbon, self.bath)

    def pure_state(self, topo: ChainTopology) -> StateVector:
        """纯积态 |carbon⟩ ⊗ |bath…bath⟩."""
        if not self.is_pure:
            raise ValueError("initial state contains a maximally-mixed part")
        bits = [self.bath.bit] * topo.n_sites
        bits[CARBON_SITE] = self.carbon.bit
        return StateVector.basis(bits)

    def members(
        self,
        topo: ChainTopology,
        n_samples: int = REFERENCE_DEFAULTS.ENSEMBLE_SAMPLES,
        seed: int = 0,
    ) -> list[StateVector]:
        """系综成员.

        纯态只有一个成员；最大混态的格点用 default_rng(seed) 抽取的随机比特
        初始化，按固定顺序生成，保证可复现。

        Args:
            topo: 链拓扑。
            n_samples: 混态时的样本数。
            seed: 随机种子。

        Returns:
            计算基态列表，等权平均即为初始对角系综。
        """
        if self.is_pure:
            return [self.pure_state(topo)]
        if n_samples < 1:
            raise ValueError(f"ensemble needs at least one sample, got {n_samples}")

        rng = np.random.default_rng(seed)
        draws = rng.integers(0, 2, size=(n_samples, topo.n_sites))
        fixed = [self.bath if site != CARBON_SITE else self.carbon for site in range(topo.n_sites)]
        members: list[StateVector] = []
        for row in draws:
            bits = [
                int(row[site]) if state is SiteState.MIXED else state.bit
                for site, state in enumerate(fixed)
            ]
            members.append(StateVector.basis(bits))
        logger.debug(f"Drew {n_samples} bit-string members with seed {seed}")
        return members
