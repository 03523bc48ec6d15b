"""碳-氢双链拓扑与耦合参数.

格点编号：0 为碳，1…N 为链 a (近邻在前)，N+1…2N 为链 b。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from spinforge.constants import HBAR

CARBON_SITE = 0
ChainName = Literal["a", "b"]
CHAINS: tuple[ChainName, ...] = ("a", "b")


@dataclass(frozen=True)
class ChainTopology:
    """一个 13C 与两条各含 N 个 1H 的线性链.

    Attributes:
        n_per_chain: 每条链的氢原子数 N。
    """

    n_per_chain: int

    def __post_init__(self) -> None:
        if self.n_per_chain < 1:
            raise ValueError(f"n_per_chain must be >= 1, got {self.n_per_chain}")

    @classmethod
    def from_total_hydrogens(cls, total: int) -> ChainTopology:
        """按氢原子总数 2N 构造."""
        if total < 2 or total % 2:
            raise ValueError(f"total hydrogen count must be even and >= 2, got {total}")
        return cls(total // 2)

    @property
    def n_chains(self) -> int:
        return len(CHAINS)

    @property
    def n_hydrogens(self) -> int:
        return 2 * self.n_per_chain

    @property
    def n_sites(self) -> int:
        return 1 + self.n_hydrogens

    def hydrogen_site(self, chain: ChainName, k: int) -> int:
        """链 chain 上第 k 个氢 (k 从 1 开始) 的格点下标."""
        if not 1 <= k <= self.n_per_chain:
            raise ValueError(f"hydrogen index k={k} outside 1..{self.n_per_chain}")
        offset = CHAINS.index(chain) * self.n_per_chain
        return 1 + offset + (k - 1)

    def carbon_bonds(self) -> list[tuple[int, int]]:
        """碳只与每条链的第一个氢耦合."""
        return [(CARBON_SITE, self.hydrogen_site(chain, 1)) for chain in CHAINS]

    def hydrogen_bonds(self) -> list[tuple[int, int]]:
        """同一链内相邻氢之间的键 (k, k+1)."""
        return [
            (self.hydrogen_site(chain, k), self.hydrogen_site(chain, k + 1))
            for chain in CHAINS
            for k in range(1, self.n_per_chain)
        ]

    def hydrogen_sites(self) -> list[int]:
        return list(range(1, self.n_sites))


@dataclass(frozen=True)
class CouplingConstants:
    """自然 (未经脉冲调制) 耦合常数.

    Attributes:
        j_ch: 碳-氢耦合 (rad/s)。
        j_hh: 氢-氢耦合 (rad/s)。
    """

    j_ch: float
    j_hh: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.j_ch) and math.isfinite(self.j_hh)):
            raise ValueError(f"couplings must be finite, got {self.j_ch}, {self.j_hh}")

    @classmethod
    def from_effective(cls, j_ch_eff: float, j_hh_eff: float) -> CouplingConstants:
        """由有效耦合反推自然耦合 (J = 4 J_eff)."""
        return cls(4.0 * j_ch_eff, 4.0 * j_hh_eff)

    @property
    def j_ch_eff(self) -> float:
        return self.j_ch / 4.0

    @property
    def j_hh_eff(self) -> float:
        return self.j_hh / 4.0


@dataclass(frozen=True)
class ZeemanParams:
    """工作量子比特的塞曼参数.

    Attributes:
        omega1: 拉莫尔频率 (rad/s)。
        hbar: 约化普朗克常数 (J·s)，取 1 时能量以 rad/s 表示。
    """

    omega1: float
    hbar: float = HBAR

    def __post_init__(self) -> None:
        if not self.omega1 > 0:
            raise ValueError(f"omega1 must be > 0, got {self.omega1}")
