"""热机实验: 解析恒等式与链模拟的冲程形状."""

from __future__ import annotations

import math
from dataclasses import asdict

import numpy as np
from loguru import logger
from scipy.stats import unitary_group

from spinforge.config.schema import ExperimentConfig
from spinforge.constants import HBAR, NUMERIC_DEFAULTS
from spinforge.experiments.results import CheckResult, ExperimentResult
from spinforge.model.hamiltonians import build_zeeman
from spinforge.model.topology import ChainTopology, ZeemanParams
from spinforge.thermo.gibbs import (
    InverseTemperature,
    MachineUnitary,
    thermal_state,
    transition_probability,
)
from spinforge.thermo.machine import (
    MachineMode,
    MachineRun,
    MachineSetup,
    closed_form_work,
    energy_gap,
    run_machine,
    settled_ledger_gap,
    work_and_heat,
)

IDENTITY_TOL = 1e-12
EXPECTED_XI = {
    MachineUnitary.UX: 0.5,
    MachineUnitary.UY: 0.5,
    MachineUnitary.UPI: 1.0,
    MachineUnitary.UI: 0.0,
}
DROP_RATIO_TOL = 0.25
IDLE_DROP_TOL = 0.02
RISE_MIN = 0.25
LEDGER_GAP_TOL = 0.15
# 随机抽样范围: β·ħω ∈ (−5, −0.01)，ω 介于 1 MHz 与 1 GHz
_RATIO_RANGE = (-5.0, -0.01)
_OMEGA_RANGE = (2 * math.pi * 1e6, 2 * math.pi * 1e9)


def random_identity_deviation(n_draws: int, seed: int = 0) -> tuple[float, float]:
    """随机 (β<0, ω, U) 抽样下迹运算功与闭式的最大偏差.

    Returns:
        (max |W − W_closed| / Δ, max |η − 1|)，后者只统计 ξ > 0 的抽样。
    """
    rng = np.random.default_rng(seed)
    work_deviation = 0.0
    efficiency_deviation = 0.0
    for _ in range(n_draws):
        omega = float(rng.uniform(*_OMEGA_RANGE))
        ratio = float(rng.uniform(*_RATIO_RANGE))
        u = unitary_group.rvs(2, random_state=rng)
        h1 = build_zeeman(ZeemanParams(omega, HBAR))
        gap = energy_gap(h1)
        beta = InverseTemperature.from_energy_ratio(ratio, gap)
        record = work_and_heat(thermal_state(h1, beta), u, h1)
        expected = closed_form_work(beta, gap, transition_probability(u))
        work_deviation = max(work_deviation, abs(record.work - expected) / gap)
        if record.efficiency is not None:
            efficiency_deviation = max(efficiency_deviation, abs(record.efficiency - 1.0))
    return work_deviation, efficiency_deviation


def _run_summary(run: MachineRun) -> dict[str, object]:
    record = run.record
    return {
        "xi": record.xi,
        "work": record.work,
        "heat": record.heat,
        "efficiency": record.efficiency,
        "bloch_after": list(record.bloch_after),
        "strokes": [
            {**asdict(stroke), "energy_change": stroke.energy_change} for stroke in run.strokes
        ],
    }


def _stroke_table(run: MachineRun) -> dict[str, np.ndarray]:
    trajectory = run.trajectory
    assert trajectory is not None
    names = [stroke.name for stroke in run.strokes]
    starts = np.array([segment.times[0] for _, segment in run.segments])
    owner = np.searchsorted(starts, trajectory.times, side="right") - 1
    stroke = np.array([names.index(run.segments[k][0]) for k in owner], dtype=np.float64)
    return {
        "time": trajectory.times,
        "stroke": stroke,
        "mz": trajectory.mz,
        "pe": trajectory.excited_population,
    }


def _unitary_drop(run: MachineRun) -> tuple[float, float, float]:
    """(热化后的 P_e, 幺正冲程的 P_e 下降, 再热化的恢复量)."""
    (_, first), (_, second) = run.segments
    pe_first = first.excited_population
    pe_second = second.excited_population
    drop = float(pe_first[-1] - pe_second[0])
    recovery = second.final_average(pe_second) - float(pe_second[0])
    return float(pe_first[-1]), drop, recovery


def _analytic_checks(
    config: ExperimentConfig, unitary: MachineUnitary, run: MachineRun
) -> list[CheckResult]:
    record = run.record
    beta = config.machine.inverse_temperature()
    h1 = build_zeeman(config.machine.zeeman(), config.convention)
    gap = energy_gap(h1)
    checks = [
        CheckResult.below(
            f"{unitary}_work_closed_form",
            abs(record.work - closed_form_work(beta, gap, record.xi)) / gap,
            IDENTITY_TOL,
        ),
        CheckResult.below(
            f"{unitary}_heat_balance", abs(record.work + record.heat) / gap, IDENTITY_TOL
        ),
    ]
    if config.convention.scale == 0.5:
        checks.append(
            CheckResult.below(
                f"{unitary}_xi", abs(record.xi - EXPECTED_XI[unitary]), IDENTITY_TOL
            )
        )
    if record.xi > NUMERIC_DEFAULTS.XI_ZERO_TOL:
        assert record.efficiency is not None
        checks.append(
            CheckResult.below(
                f"{unitary}_efficiency", abs(record.efficiency - 1.0), IDENTITY_TOL
            )
        )
    else:
        checks.append(
            CheckResult(f"{unitary}_efficiency_undefined", record.efficiency is None)
        )
    return checks


def drop_ratio_check(drop_upi: float, drop_ux: float) -> CheckResult:
    """U_π 与 U_x 的 P_e 下降之比应为 2；U_x 没有下降时检查失败."""
    if drop_ux <= 0:
        return CheckResult(
            "drop_ratio_upi_ux",
            False,
            float(drop_ux),
            DROP_RATIO_TOL,
            f"Ux drop {drop_ux:.4f} is not positive",
        )
    ratio = drop_upi / drop_ux
    return CheckResult.below(
        "drop_ratio_upi_ux", abs(ratio / 2.0 - 1.0), DROP_RATIO_TOL, f"ratio {ratio:.4f}"
    )


def ledger_checks(gaps: dict[int, float]) -> list[CheckResult]:
    """热化账目随热库增大而闭合: 相对失配逐级减小，最大热库上低于容差.

    Args:
        gaps: 氢原子数 → settled_ledger_gap。
    """
    sizes = sorted(gaps)
    checks = [
        CheckResult.below(f"h{sizes[-1]}_ledger_gap", gaps[sizes[-1]], LEDGER_GAP_TOL)
    ]
    if len(sizes) > 1:
        steps = [gaps[b] / gaps[a] for a, b in zip(sizes, sizes[1:]) if gaps[a] > 0]
        worst = max(steps) if steps else math.inf
        checks.append(
            CheckResult.below(
                "ledger_gap_shrinks",
                worst,
                1.0,
                ", ".join(f"{n}H {gaps[n]:.4f}" for n in sizes),
            )
        )
    return checks


def _setup(
    config: ExperimentConfig, unitary: MachineUnitary, topology: ChainTopology
) -> MachineSetup:
    machine = config.machine
    cycle, n_cycles = config.cycle.cycles(config.convention)[0]
    return MachineSetup(
        beta=machine.inverse_temperature(),
        zeeman=machine.zeeman(),
        unitary=unitary,
        mode=machine.mode,
        convention=config.convention,
        topology=topology,
        couplings=config.couplings.constants(),
        cycle=cycle,
        n_cycles=n_cycles,
        method=config.sampling.method,
    )


def run_machine_experiment(
    config: ExperimentConfig, threads: int | None = 1
) -> ExperimentResult:
    """对配置中的每个幺正冲程运行一次热机循环.

    冲程形状在最大的热库上检查；模拟模式下 U_π 还在每个热库上运行，
    检查热化账目随热库增大而闭合。
    """
    result = ExperimentResult(config.experiment)
    machine = config.machine
    topologies = sorted(config.topology.topologies(), key=lambda topo: topo.n_sites)
    largest = topologies[-1]
    runs = {
        unitary: run_machine(_setup(config, unitary, largest), threads)
        for unitary in machine.unitaries
    }

    for unitary, run in runs.items():
        result.add_table(f"machine_{unitary}.csv", _stroke_table(run))
        result.summary.setdefault("unitaries", {})[str(unitary)] = _run_summary(run)

    result.summary["mode"] = str(machine.mode)
    result.summary["stroke_names"] = [stroke.name for stroke in next(iter(runs.values())).strokes]
    result.summary["beta_per_joule"] = machine.inverse_temperature().beta

    if machine.mode is MachineMode.ANALYTIC:
        result.summary["time_unit"] = "stroke"
        for unitary, run in runs.items():
            result.checks.extend(_analytic_checks(config, unitary, run))
        if machine.random_draws:
            work_deviation, efficiency_deviation = random_identity_deviation(
                machine.random_draws, config.seed
            )
            result.checks.append(
                CheckResult.below("random_work_closed_form", work_deviation, IDENTITY_TOL)
            )
            result.checks.append(
                CheckResult.below("random_efficiency", efficiency_deviation, IDENTITY_TOL)
            )
        return result

    result.summary["time_unit"] = "s"
    result.summary["hydrogens"] = largest.n_hydrogens
    drops: dict[MachineUnitary, float] = {}
    for unitary, run in runs.items():
        pe_thermal, drop, recovery = _unitary_drop(run)
        drops[unitary] = drop
        logger.info(
            f"{unitary}: P_e after thermalization {pe_thermal:.4f}, drop {drop:.4f}, "
            f"recovery {recovery:.4f}"
        )
        result.checks.append(
            CheckResult.above(f"{unitary}_thermalization_rise", pe_thermal, RISE_MIN)
        )
        if unitary is MachineUnitary.UI:
            result.checks.append(CheckResult.below("UI_no_drop", abs(drop), IDLE_DROP_TOL))
        else:
            result.checks.append(CheckResult.above(f"{unitary}_recovery", recovery, 0.0))

    if MachineUnitary.UPI in drops and MachineUnitary.UX in drops:
        result.checks.append(drop_ratio_check(drops[MachineUnitary.UPI], drops[MachineUnitary.UX]))

    if MachineUnitary.UPI in runs:
        ledger_runs = {largest.n_hydrogens: runs[MachineUnitary.UPI]}
        for topology in topologies[:-1]:
            ledger_runs[topology.n_hydrogens] = run_machine(
                _setup(config, MachineUnitary.UPI, topology), threads
            )
        gaps = {n: settled_ledger_gap(run) for n, run in ledger_runs.items()}
        for n in sorted(gaps):
            logger.info(f"{n}H: settled ledger gap {gaps[n]:.4f}")
        result.summary["ledger_gap"] = {str(n): gaps[n] for n in sorted(gaps)}
        result.checks.extend(ledger_checks(gaps))
    return result
