"""时间演化与轨迹采样.

有效哈密顿量模式按均匀时间网格采样；脉冲模式每个循环采样一次，
时间戳为墙钟时间。混态热库由比特串系综平均：先对约化密度矩阵取
平均，再计算 M_z 和 EoF。
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from loguru import logger

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.exponential import EvolutionMethod, TimeEvolution
from spinforge.algebra.pauli import OperatorSum
from spinforge.algebra.states import DensityMatrix, StateVector, expectation, partial_trace
from spinforge.constants import NUMERIC_DEFAULTS, REFERENCE_DEFAULTS
from spinforge.dynamics.entanglement import eof as entanglement_of_formation
from spinforge.model.hamiltonians import (
    build_effective_hamiltonian,
    build_natural_hamiltonian,
    total_z,
)
from spinforge.model.topology import CARBON_SITE, ChainTopology, CouplingConstants
from spinforge.pulses.cycle import PulseCycle
from spinforge.pulses.propagator import CyclePropagator
from spinforge.utils.parallel import ordered_map

MZ_BOUND_TOL = 1e-9

Ensemble = StateVector | Sequence[StateVector]


def evolve(
    psi: StateVector,
    hamiltonian: OperatorSum,
    t: float,
    method: EvolutionMethod | str = EvolutionMethod.AUTO,
) -> StateVector:
    """ψ(t) = exp(−iHt) ψ，H 以 rad/s 为单位.

    Raises:
        ValueError: H 不厄米或格点数不匹配。
    """
    if hamiltonian.n_sites != psi.n_sites:
        raise ValueError(
            f"Hamiltonian acts on {hamiltonian.n_sites} sites but state has {psi.n_sites}"
        )
    result = psi.with_amplitudes(TimeEvolution(hamiltonian, method).evolve(psi.amplitudes, t))
    drift = abs(result.norm - psi.norm)
    if drift > NUMERIC_DEFAULTS.NORM_TOL:
        logger.warning(f"Norm drifted by {drift:.2e} during evolution over t={t:.3e}")
    return result


@dataclass(frozen=True)
class Observables:
    """轨迹上记录的量.

    Attributes:
        eof: 是否记录碳与 partner 之间的 EoF。
        transverse: 是否记录碳的 ⟨σ_x⟩、⟨σ_y⟩。
        energy: 若给出则记录 ⟨energy⟩。
        total_z: 是否记录 Σ_i ⟨σ_z^{(i)}⟩。
        partner: 与碳组成纠缠对的格点，默认链 a 第一个氢。
    """

    eof: bool = True
    transverse: bool = False
    energy: OperatorSum | None = None
    total_z: bool = False
    partner: int = 1


@dataclass(frozen=True, eq=False)
class Trajectory:
    """碳的磁化强度 (及可选量) 随时间的采样.

    Attributes:
        times: 严格递增的采样时刻 (s)。
        mz: 碳的 ⟨σ_z⟩。
        eof: 碳与 partner 的 EoF。
        mx: 碳的 ⟨σ_x⟩。
        my: 碳的 ⟨σ_y⟩。
        energy: 能量期望值。
        total_z: 总 z 磁化。
        free_times: 脉冲模式下累计的自由演化时间 (s)。
        final_states: 各系综成员的末态，用于拼接后续演化。
    """

    times: np.ndarray
    mz: np.ndarray
    eof: np.ndarray | None = None
    mx: np.ndarray | None = None
    my: np.ndarray | None = None
    energy: np.ndarray | None = None
    total_z: np.ndarray | None = None
    free_times: np.ndarray | None = None
    final_states: tuple[StateVector, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("trajectory needs a non-empty 1-D time grid")
        if np.any(np.diff(times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        object.__setattr__(self, "times", times)
        for name in ("mz", "eof", "mx", "my", "energy", "total_z", "free_times"):
            values = getattr(self, name)
            if values is None:
                continue
            values = np.asarray(values, dtype=np.float64)
            if values.shape != times.shape:
                raise ValueError(f"{name} has shape {values.shape}, expected {times.shape}")
            object.__setattr__(self, name, values)
        if np.any(np.abs(self.mz) > 1.0 + MZ_BOUND_TOL):
            raise ValueError(f"M_z outside [-1, 1]: max |M_z| = {np.abs(self.mz).max():.12g}")

    def __len__(self) -> int:
        return self.times.size

    @property
    def excited_population(self) -> np.ndarray:
        """碳处于 |1⟩ 的概率 P_e = (1 − M_z)/2."""
        return 0.5 * (1.0 - self.mz)

    def final_average(self, values: np.ndarray | None = None, fraction: float = 0.2) -> float:
        """最后 fraction 比例采样点的平均值，缺省对 M_z."""
        if not 0 < fraction <= 1:
            raise ValueError(f"fraction must be in (0, 1], got {fraction}")
        values = self.mz if values is None else values
        start = min(int(np.floor((1.0 - fraction) * len(values))), len(values) - 1)
        return float(np.mean(values[start:]))

    def columns(self, prefix: str = "") -> dict[str, np.ndarray]:
        """按列名导出已记录的量."""
        columns = {f"{prefix}mz": self.mz}
        for name in ("eof", "mx", "my", "energy", "total_z"):
            values = getattr(self, name)
            if values is not None:
                columns[f"{prefix}{name}"] = values
        return columns

    def shifted(self, offset: float) -> Trajectory:
        """整体平移时间轴."""
        return Trajectory(
            self.times + offset,
            self.mz,
            self.eof,
            self.mx,
            self.my,
            self.energy,
            self.total_z,
            self.free_times,
            self.final_states,
        )


@dataclass
class _MemberRecord:
    pairs: list[np.ndarray] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)
    total_z: list[float] = field(default_factory=list)
    final_state: StateVector | None = None


def _observe(
    psi: StateVector,
    observables: Observables,
    magnetization: OperatorSum | None,
    record: _MemberRecord,
) -> None:
    record.pairs.append(partial_trace(psi, (CARBON_SITE, observables.partner)).elements)
    if observables.energy is not None:
        record.energy.append(expectation(psi, observables.energy))
    if magnetization is not None:
        record.total_z.append(expectation(psi, magnetization))


def _sample_member(
    psi0: StateVector,
    advance: Callable[[np.ndarray], np.ndarray],
    n_steps: int,
    observables: Observables,
) -> _MemberRecord:
    magnetization = total_z(psi0.n_sites) if observables.total_z else None
    record = _MemberRecord()
    psi = psi0
    _observe(psi, observables, magnetization, record)
    for _ in range(n_steps):
        psi = psi.with_amplitudes(advance(psi.amplitudes))
        _observe(psi, observables, magnetization, record)
    record.final_state = psi
    return record


def _reduce(
    records: list[_MemberRecord],
    times: np.ndarray,
    observables: Observables,
    free_times: np.ndarray | None = None,
) -> Trajectory:
    # 按成员顺序求平均，结果与线程数无关
    pairs = np.mean(np.stack([np.stack(record.pairs) for record in records]), axis=0)
    mz = np.empty(len(times))
    mx = np.empty(len(times))
    my = np.empty(len(times))
    eof = np.empty(len(times)) if observables.eof else None
    for k, pair in enumerate(pairs):
        carbon = partial_trace(DensityMatrix(pair, 2), (0,))
        mx[k], my[k], mz[k] = carbon.bloch_vector()
        if eof is not None:
            eof[k] = entanglement_of_formation(pair)

    def _mean(name: str) -> np.ndarray:
        return np.mean(np.array([getattr(record, name) for record in records]), axis=0)

    return Trajectory(
        times=times,
        mz=mz,
        eof=eof,
        mx=mx if observables.transverse else None,
        my=my if observables.transverse else None,
        energy=_mean("energy") if observables.energy is not None else None,
        total_z=_mean("total_z") if observables.total_z else None,
        free_times=free_times,
        final_states=tuple(
            record.final_state for record in records if record.final_state is not None
        ),
    )


def _as_members(psi0: Ensemble) -> list[StateVector]:
    members = [psi0] if isinstance(psi0, StateVector) else list(psi0)
    if not members:
        raise ValueError("initial ensemble is empty")
    return members


def run_hamiltonian(
    hamiltonian: OperatorSum,
    psi0: Ensemble,
    t_total: float,
    n_samples: int = REFERENCE_DEFAULTS.EFFECTIVE_SAMPLES,
    *,
    method: EvolutionMethod | str = EvolutionMethod.AUTO,
    observables: Observables | None = None,
    threads: int | None = 1,
) -> Trajectory:
    """在均匀时间网格上采样 exp(−iHt)ψ0.

    Args:
        hamiltonian: 厄米哈密顿量 (rad/s)。
        psi0: 初态或等权系综。
        t_total: 总时长 (s)。
        n_samples: 采样点数 (含 t=0 与 t_total)。
        method: 演化方法。
        observables: 记录的量。
        threads: 系综成员并行线程数。

    Returns:
        系综平均后的轨迹。
    """
    if not t_total > 0:
        raise ValueError(f"t_total must be > 0, got {t_total}")
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    observables = observables or Observables()
    members = _as_members(psi0)

    times = np.linspace(0.0, t_total, n_samples)
    dt = t_total / (n_samples - 1)
    evolution = TimeEvolution(hamiltonian, method)
    if evolution.method is EvolutionMethod.DENSE:
        evolution.unitary(dt)
    logger.debug(f"Sampling {n_samples} points over {t_total:.3e}s for {len(members)} member(s)")

    records = ordered_map(
        lambda psi: _sample_member(
            psi, lambda amps: evolution.step(amps, dt), n_samples - 1, observables
        ),
        members,
        threads,
    )
    return _reduce(records, times, observables)


def run_effective(
    topo: ChainTopology,
    couplings: CouplingConstants,
    psi0: Ensemble,
    t_total: float,
    n_samples: int = REFERENCE_DEFAULTS.EFFECTIVE_SAMPLES,
    *,
    convention: SpinConvention = DEFAULT_CONVENTION,
    method: EvolutionMethod | str = EvolutionMethod.AUTO,
    observables: Observables | None = None,
    threads: int | None = 1,
) -> Trajectory:
    """有效哈密顿量下的轨迹."""
    hamiltonian = build_effective_hamiltonian(topo, couplings, convention)
    return run_hamiltonian(
        hamiltonian,
        psi0,
        t_total,
        n_samples,
        method=method,
        observables=observables,
        threads=threads,
    )


def run_propagator(
    propagator: CyclePropagator,
    psi0: Ensemble,
    n_cycles: int,
    *,
    observables: Observables | None = None,
    threads: int | None = 1,
) -> Trajectory:
    """重复作用循环传播子，每个循环采样一次."""
    if n_cycles < 1:
        raise ValueError(f"n_cycles must be >= 1, got {n_cycles}")
    observables = observables or Observables()
    members = _as_members(psi0)
    if propagator.evolution.method is EvolutionMethod.DENSE:
        propagator.to_dense()

    cycle = propagator.cycle
    steps = np.arange(n_cycles + 1)
    logger.debug(
        f"Applying {n_cycles} cycles (delta_t={cycle.delta_t:.3e}s) to {len(members)} member(s)"
    )
    records = ordered_map(
        lambda psi: _sample_member(psi, propagator.apply, n_cycles, observables),
        members,
        threads,
    )
    return _reduce(records, steps * cycle.cycle_time, observables, steps * cycle.free_time)


def run_pulsed(
    topo: ChainTopology,
    couplings: CouplingConstants,
    cycle: PulseCycle,
    psi0: Ensemble,
    n_cycles: int,
    *,
    convention: SpinConvention = DEFAULT_CONVENTION,
    method: EvolutionMethod | str = EvolutionMethod.AUTO,
    observables: Observables | None = None,
    threads: int | None = 1,
) -> Trajectory:
    """自然哈密顿量加四脉冲循环下的轨迹，时间戳为墙钟时间."""
    hamiltonian = build_natural_hamiltonian(topo, couplings, convention)
    propagator = CyclePropagator(hamiltonian, cycle, convention, method)
    return run_propagator(
        propagator, psi0, n_cycles, observables=observables, threads=threads
    )
