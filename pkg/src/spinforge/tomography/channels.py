"""工程化热化信道: 碳与氢链联合演化后对热库求迹.

输入 ρ ⊗ |B⟩⟨B| 经幺正演化后，碳的约化态为 Σ_ab ρ_ab A_a A_b†，
其中 A_a 是 U(|a⟩ ⊗ |B⟩) 按碳格点重排的 2 × 2^{n-1} 振幅矩阵。
混态热库对比特串系综取平均，信道仍然精确线性。
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from loguru import logger

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.exponential import EvolutionMethod, TimeEvolution
from spinforge.algebra.states import (
    DensityMatrix,
    StateVector,
    apply_local,
    reduced_amplitude_matrix,
)
from spinforge.constants import REFERENCE_DEFAULTS
from spinforge.dynamics.initial import InitialState, SiteState
from spinforge.dynamics.trajectory import Observables, run_hamiltonian
from spinforge.model.hamiltonians import build_effective_hamiltonian, build_natural_hamiltonian
from spinforge.model.topology import CARBON_SITE, ChainTopology, CouplingConstants
from spinforge.pulses.cycle import PulseCycle
from spinforge.pulses.propagator import CyclePropagator
from spinforge.utils.parallel import ordered_map

_FLIP = np.array([[0, 1], [1, 0]], dtype=np.complex128)


@dataclass(frozen=True, eq=False)
class ThermalizationChannel:
    """碳自旋上的约化信道 ε(ρ) = Σ_ab ρ_ab G_ab.

    Attributes:
        blocks: G_ab = mean_members A_a A_b†，形状 (2, 2, 2, 2)。
        duration: 演化时长 (s)，脉冲模式下为墙钟时间。
        bath: 热库初态。
    """

    blocks: np.ndarray
    duration: float
    bath: SiteState

    def __call__(self, rho: DensityMatrix) -> DensityMatrix:
        if rho.n_sites != 1:
            raise ValueError(f"thermalization channel acts on one site, got {rho.n_sites}")
        out = np.einsum("ab,abij->ij", rho.elements, self.blocks)
        return DensityMatrix(out, 1)

    @property
    def ideal_target(self) -> int:
        """完全热化时碳趋向的基态比特."""
        return 1 if self.bath is SiteState.EXCITED else 0


def thermalization_channel(
    topo: ChainTopology,
    couplings: CouplingConstants,
    bath: SiteState | str,
    *,
    t_total: float | None = None,
    cycle: PulseCycle | None = None,
    n_cycles: int | None = None,
    convention: SpinConvention = DEFAULT_CONVENTION,
    method: EvolutionMethod | str = EvolutionMethod.AUTO,
    n_samples: int = REFERENCE_DEFAULTS.ENSEMBLE_SAMPLES,
    seed: int = 0,
    threads: int | None = 1,
) -> ThermalizationChannel:
    """构造碳的热化信道.

    给出 cycle 与 n_cycles 时用脉冲传播子演化，否则在 H_eff 下演化 t_total。

    Args:
        topo: 链拓扑。
        couplings: 自然耦合。
        bath: 氢链初态。
        t_total: 有效哈密顿量模式的演化时长 (s)。
        cycle: 脉冲循环。
        n_cycles: 循环次数。
        convention: 自旋约定。
        method: 演化方法。
        n_samples: 混态热库的系综样本数。
        seed: 系综随机种子。
        threads: 并行线程数。

    Returns:
        ThermalizationChannel。
    """
    bath = SiteState(bath)
    members = InitialState(SiteState.GROUND, bath).members(topo, n_samples, seed)

    if cycle is not None:
        if n_cycles is None or n_cycles < 1:
            raise ValueError(f"pulsed channel needs n_cycles >= 1, got {n_cycles}")
        propagator = CyclePropagator(
            build_natural_hamiltonian(topo, couplings, convention), cycle, convention, method
        )

        def advance(amplitudes: np.ndarray) -> np.ndarray:
            for _ in range(n_cycles):
                amplitudes = propagator.apply(amplitudes)
            return amplitudes

        if propagator.evolution.method is EvolutionMethod.DENSE:
            propagator.to_dense()
        duration = n_cycles * cycle.cycle_time
    else:
        if t_total is None or not t_total > 0:
            raise ValueError(f"effective channel needs t_total > 0, got {t_total}")
        evolution = TimeEvolution(build_effective_hamiltonian(topo, couplings, convention), method)
        if evolution.method is EvolutionMethod.DENSE:
            evolution.eigensystem()

        def advance(amplitudes: np.ndarray) -> np.ndarray:
            return evolution.evolve(amplitudes, t_total)

        duration = t_total

    def member_blocks(psi: StateVector) -> np.ndarray:
        # psi 的碳处于 |0⟩，翻转得到 |1⟩ ⊗ |B⟩
        starts = (psi, apply_local(psi, CARBON_SITE, _FLIP))
        rows = [
            reduced_amplitude_matrix(advance(start.amplitudes), topo.n_sites, (CARBON_SITE,))
            for start in starts
        ]
        return np.einsum("aim,bjm->abij", np.stack(rows), np.stack(rows).conj())

    blocks = np.mean(np.stack(ordered_map(member_blocks, members, threads)), axis=0)
    logger.debug(
        f"Thermalization channel: {topo.n_hydrogens} hydrogens, bath={bath}, "
        f"{len(members)} member(s), duration={duration:.3e}s"
    )
    return ThermalizationChannel(blocks, duration, bath)


def thermalization_time(
    topo: ChainTopology,
    couplings: CouplingConstants,
    bath: SiteState | str,
    t_window: float,
    n_samples: int = REFERENCE_DEFAULTS.EFFECTIVE_SAMPLES,
    *,
    convention: SpinConvention = DEFAULT_CONVENTION,
    method: EvolutionMethod | str = EvolutionMethod.AUTO,
) -> float:
    """窗口内碳最接近热库极化的采样时刻.

    参照初态是碳与热库相反的纯积态，在 H_eff 下按均匀网格采样；
    ⟨σ_z⟩ 离热库值最近的网格点即完全热化点。

    Args:
        topo: 链拓扑。
        couplings: 自然耦合。
        bath: 氢链初态，必须是 ground 或 excited。
        t_window: 搜索窗口 (s)。
        n_samples: 网格点数。
        convention: 自旋约定。
        method: 演化方法。

    Returns:
        热化时刻 (s)。
    """
    bath = SiteState(bath)
    if bath is SiteState.MIXED:
        raise ValueError("thermalization time needs a polarized bath")
    carbon = SiteState.GROUND if bath is SiteState.EXCITED else SiteState.EXCITED
    trajectory = run_hamiltonian(
        build_effective_hamiltonian(topo, couplings, convention),
        InitialState(carbon, bath).pure_state(topo),
        t_window,
        n_samples,
        method=method,
        observables=Observables(eof=False),
    )
    target = 1.0 - 2.0 * bath.bit
    index = int(np.argmin(np.abs(trajectory.mz - target)))
    logger.debug(
        f"Carbon closest to bath polarization at t={trajectory.times[index]:.4e}s "
        f"(M_z = {trajectory.mz[index]:.4f})"
    )
    return float(trajectory.times[index])
