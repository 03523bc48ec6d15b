"""单热库量子热机: 幺正冲程 + 热化冲程.

ρ_ground → ρ_1 (与热库接触) → ρ_2 = U ρ_1 U† (做功) → ρ_1 (再热化)。
功 ⟨W⟩ = Tr[ρ_2 H_1] − Tr[ρ_1 H_1]，负值表示机器对外做功；热 ⟨Q⟩ = −⟨W⟩。
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
from loguru import logger

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.exponential import EvolutionMethod
from spinforge.algebra.pauli import OperatorSum
from spinforge.algebra.states import DensityMatrix, apply_local
from spinforge.constants import NUMERIC_DEFAULTS
from spinforge.dynamics.initial import InitialState, SiteState
from spinforge.dynamics.trajectory import Observables, Trajectory, run_propagator
from spinforge.model.hamiltonians import build_natural_hamiltonian, build_zeeman
from spinforge.model.topology import CARBON_SITE, ChainTopology, CouplingConstants, ZeemanParams
from spinforge.pulses.cycle import PulseCycle
from spinforge.pulses.propagator import CyclePropagator
from spinforge.thermo.gibbs import (
    InverseTemperature,
    MachineUnitary,
    check_unitary,
    machine_unitary,
    thermal_state,
    transition_probability,
)
from spinforge.utils.parallel import ordered_map

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


class MachineMode(StrEnum):
    """热机计算模式."""

    ANALYTIC = "analytic"
    SIMULATED = "simulated"


class StrokeKind(StrEnum):
    HEAT = "heat"
    WORK = "work"


@dataclass(frozen=True)
class StrokeRecord:
    """单个冲程的能量账目.

    Attributes:
        name: 冲程名称。
        kind: 热 (与热库接触) 或功 (幺正)。
        start_time: 开始时刻 (s)，解析模式下为冲程序号。
        end_time: 结束时刻。
        energy_start: 冲程开始时 ⟨H_1⟩ (J)。
        energy_end: 冲程结束时 ⟨H_1⟩ (J)。
    """

    name: str
    kind: StrokeKind
    start_time: float
    end_time: float
    energy_start: float
    energy_end: float

    @property
    def energy_change(self) -> float:
        return self.energy_end - self.energy_start


@dataclass(frozen=True)
class MachineRecord:
    """一次热机循环的功、热与效率.

    Attributes:
        xi: 跃迁概率 |⟨1|U|0⟩|²。
        work: ⟨W⟩ (J)，负值表示对外做功。
        heat: ⟨Q⟩ (J)，再热化冲程从热库吸收的热。
        efficiency: η = |W/Q|，ξ = 0 或 Q = 0 时为 None。
        bloch_after: 幺正冲程后碳的 (M_x, M_y, M_z)。
    """

    xi: float
    work: float
    heat: float
    efficiency: float | None
    bloch_after: tuple[float, float, float]


def _efficiency(xi: float, work: float, heat: float, energy_scale: float) -> float | None:
    tol = NUMERIC_DEFAULTS.XI_ZERO_TOL
    if xi < tol or abs(heat) <= tol * energy_scale:
        return None
    return abs(work / heat)


def _energy(rho: DensityMatrix, h_dense: np.ndarray) -> float:
    return rho.expectation(h_dense)


def work_and_heat(
    rho1: DensityMatrix,
    u: np.ndarray,
    h1: OperatorSum,
    commutator_tol: float = NUMERIC_DEFAULTS.GIBBS_COMMUTATOR_TOL,
) -> MachineRecord:
    """由迹运算计算两冲程循环的功和热.

    Args:
        rho1: H_1 的吉布斯态。
        u: 单比特幺正冲程。
        h1: 工作比特哈密顿量 (J)。
        commutator_tol: ‖[ρ_1, H_1]‖/‖H_1‖ 的容差。

    Returns:
        MachineRecord，其中 heat = −work。

    Raises:
        ValueError: ρ_1 与 H_1 不对易 (不是吉布斯态) 或 U 不幺正。
    """
    u = check_unitary(u)
    h_dense = h1.to_dense()
    scale = float(np.linalg.norm(h_dense, 2))
    commutator = rho1.elements @ h_dense - h_dense @ rho1.elements
    if scale > 0 and float(np.linalg.norm(commutator)) / scale > commutator_tol:
        raise ValueError("rho1 does not commute with H1; expected a Gibbs state")

    rho2 = DensityMatrix(u @ rho1.elements @ u.conj().T, 1)
    work = _energy(rho2, h_dense) - _energy(rho1, h_dense)
    heat = -work
    xi = transition_probability(u)
    return MachineRecord(xi, work, heat, _efficiency(xi, work, heat, scale), rho2.bloch_vector())


def energy_gap(h1: OperatorSum) -> float:
    """单比特哈密顿量的能隙 (J)."""
    energies = np.linalg.eigvalsh(h1.to_dense())
    return float(energies[-1] - energies[0])


def closed_form_work(beta: InverseTemperature | float, gap: float, xi: float) -> float:
    """⟨W⟩ = Δ ξ tanh(βΔ/2)；β < 0 时为 −Δ ξ tanh(|β|Δ/2)."""
    beta = beta.beta if isinstance(beta, InverseTemperature) else float(beta)
    return gap * xi * math.tanh(beta * gap / 2.0)


@dataclass(frozen=True)
class MachineSetup:
    """热机配置.

    Attributes:
        beta: 热库逆温度 (解析模式)。
        zeeman: 工作比特塞曼参数。
        unitary: 幺正冲程。
        mode: 解析或链模拟。
        convention: 自旋约定。
        topology: 模拟模式的链拓扑。
        couplings: 模拟模式的自然耦合。
        cycle: 模拟模式的脉冲循环。
        n_cycles: 每个热化冲程的循环数。
        method: 演化方法。
    """

    beta: InverseTemperature
    zeeman: ZeemanParams
    unitary: MachineUnitary
    mode: MachineMode = MachineMode.ANALYTIC
    convention: SpinConvention = DEFAULT_CONVENTION
    topology: ChainTopology | None = None
    couplings: CouplingConstants | None = None
    cycle: PulseCycle | None = None
    n_cycles: int = 225
    method: EvolutionMethod = EvolutionMethod.AUTO

    def __post_init__(self) -> None:
        object.__setattr__(self, "unitary", MachineUnitary(self.unitary))
        object.__setattr__(self, "mode", MachineMode(self.mode))
        if self.mode is MachineMode.SIMULATED:
            missing = [
                name for name in ("topology", "couplings", "cycle") if getattr(self, name) is None
            ]
            if missing:
                raise ValueError(f"simulated machine needs {', '.join(missing)}")
            if self.n_cycles < 1:
                raise ValueError(f"n_cycles must be >= 1, got {self.n_cycles}")


@dataclass(frozen=True, eq=False)
class MachineRun:
    """热机运行结果.

    Attributes:
        record: 功、热、效率。
        strokes: 按时间顺序的冲程账目。
        segments: 每个冲程的 (名称, 轨迹)，时间在各段内严格递增。
    """

    record: MachineRecord
    strokes: tuple[StrokeRecord, ...]
    segments: tuple[tuple[str, Trajectory], ...] = field(default=())

    @property
    def trajectory(self) -> Trajectory | None:
        """拼接各段的碳磁化轨迹，冲程边界处的重复时刻只保留后一段."""
        if not self.segments:
            return None
        times: list[np.ndarray] = []
        mz: list[np.ndarray] = []
        for (_, segment), (_, following) in zip(
            self.segments, (*self.segments[1:], (None, None)), strict=True
        ):
            keep = len(segment)
            if following is not None and following.times[0] <= segment.times[-1]:
                keep -= 1
            times.append(segment.times[:keep])
            mz.append(segment.mz[:keep])
        return Trajectory(np.concatenate(times), np.concatenate(mz))


def _analytic(setup: MachineSetup, h1: OperatorSum) -> MachineRun:
    h_dense = h1.to_dense()
    _, vectors = np.linalg.eigh(h_dense)
    ground = np.outer(vectors[:, 0], vectors[:, 0].conj())
    rho_ground = DensityMatrix(ground, 1)
    rho1 = thermal_state(h1, setup.beta)
    u = machine_unitary(setup.unitary, setup.convention)
    record = work_and_heat(rho1, u, h1)

    e_ground = _energy(rho_ground, h_dense)
    e1 = _energy(rho1, h_dense)
    e2 = e1 + record.work
    strokes = (
        StrokeRecord("thermalize", StrokeKind.HEAT, 0.0, 1.0, e_ground, e1),
        StrokeRecord("unitary", StrokeKind.WORK, 1.0, 2.0, e1, e2),
        StrokeRecord("rethermalize", StrokeKind.HEAT, 2.0, 3.0, e2, e1),
    )
    # 解析模式的时间轴为冲程序号
    mz = [
        rho_ground.bloch_vector()[2],
        rho1.bloch_vector()[2],
        record.bloch_after[2],
        rho1.bloch_vector()[2],
    ]
    segments = (
        ("thermalize", Trajectory(np.array([0.0, 1.0]), np.array(mz[:2]))),
        ("rethermalize", Trajectory(np.array([2.0, 3.0]), np.array(mz[2:]))),
    )
    logger.debug(f"Analytic machine {setup.unitary}: xi={record.xi:.3g}, W={record.work:.3e} J")
    return MachineRun(record, strokes, segments)


def _bloch_energy(trajectory: Trajectory, index: int, h_dense: np.ndarray) -> float:
    assert trajectory.mx is not None and trajectory.my is not None
    bloch = (trajectory.mx[index], trajectory.my[index], trajectory.mz[index])
    rho = 0.5 * (np.eye(2) + sum(c * p for c, p in zip(bloch, _PAULI, strict=True)))
    return _energy(DensityMatrix(rho, 1), h_dense)


def _simulated(setup: MachineSetup, h1: OperatorSum, threads: int | None) -> MachineRun:
    assert setup.topology is not None and setup.couplings is not None and setup.cycle is not None
    h_dense = h1.to_dense()
    hamiltonian = build_natural_hamiltonian(setup.topology, setup.couplings, setup.convention)
    propagator = CyclePropagator(hamiltonian, setup.cycle, setup.convention, setup.method)
    observables = Observables(eof=False, transverse=True)

    # 负有效温度热库: 所有氢处于 |1⟩，碳从基态出发
    psi0 = InitialState(SiteState.GROUND, SiteState.EXCITED).pure_state(setup.topology)
    first = run_propagator(
        propagator, psi0, setup.n_cycles, observables=observables, threads=threads
    )

    u = machine_unitary(setup.unitary, setup.convention)
    after_u = ordered_map(lambda psi: apply_local(psi, CARBON_SITE, u), first.final_states, threads)
    second = run_propagator(
        propagator, after_u, setup.n_cycles, observables=observables, threads=threads
    ).shifted(float(first.times[-1]))

    t_u = float(first.times[-1])
    e_ground = _bloch_energy(first, 0, h_dense)
    e1 = _bloch_energy(first, -1, h_dense)
    e2 = _bloch_energy(second, 0, h_dense)
    e_end = _bloch_energy(second, -1, h_dense)
    strokes = (
        StrokeRecord("thermalize", StrokeKind.HEAT, 0.0, t_u, e_ground, e1),
        StrokeRecord("unitary", StrokeKind.WORK, t_u, t_u, e1, e2),
        StrokeRecord("rethermalize", StrokeKind.HEAT, t_u, float(second.times[-1]), e2, e_end),
    )
    xi = transition_probability(u)
    work = e2 - e1
    heat = e_end - e2
    scale = float(np.linalg.norm(h_dense, 2))
    assert second.mx is not None and second.my is not None
    bloch_after = (float(second.mx[0]), float(second.my[0]), float(second.mz[0]))
    record = MachineRecord(xi, work, heat, _efficiency(xi, work, heat, scale), bloch_after)
    logger.info(
        f"Simulated machine {setup.unitary}: xi={xi:.3g}, W={work:.3e} J, Q={heat:.3e} J"
    )
    return MachineRun(record, strokes, (("thermalize", first), ("rethermalize", second)))


def settled_ledger_gap(run: MachineRun) -> float:
    """再热化后的热与功之间的相对失配.

    两个接触冲程的热化点都取末段平均，功取幺正冲程前后的瞬时值:
    |M̄_z(再热化) − M̄_z(热化)| / |ΔM_z(幺正)|。H_1 ∝ S_z，
    在 M_z 上计算与在能量上计算给出同一比值。

    Raises:
        ValueError: 幺正冲程不改变碳磁化 (无功可比)。
    """
    (_, first), (_, second) = run.segments
    work = float(second.mz[0] - first.mz[-1])
    if abs(work) <= NUMERIC_DEFAULTS.XI_ZERO_TOL:
        raise ValueError("unitary stroke does no work; ledger gap is undefined")
    return abs(second.final_average() - first.final_average()) / abs(work)


def run_machine(setup: MachineSetup, threads: int | None = 1) -> MachineRun:
    """运行热机循环.

    解析模式用闭式吉布斯态；模拟模式中氢链初始化为 |1…1⟩，
    碳经脉冲工程化演化热化，作用 U 后再热化。
    """
    h1 = build_zeeman(setup.zeeman, setup.convention)
    if setup.mode is MachineMode.ANALYTIC:
        return _analytic(setup, h1)
    return _simulated(setup, h1, threads)
