"""脉冲序列与有效哈密顿量的收敛比较.

脉冲轨迹的第 k 个采样与有效演化在自由时间 4Δt·k 处比较；
CSV 的 time_s 列为墙钟时间。
"""

from __future__ import annotations

import numpy as np
from loguru import logger

from spinforge.config.schema import MICROSECOND, ExperimentConfig
from spinforge.dynamics.trajectory import Observables, run_effective, run_pulsed
from spinforge.experiments.results import CheckResult, ExperimentResult

CONVERGENCE_TOL = 0.05
TIMING_REL_TOL = 0.01


def _label(delta_t: float) -> str:
    return f"{delta_t / MICROSECOND:g}us"


def run_convergence(config: ExperimentConfig, threads: int | None = 1) -> ExperimentResult:
    """对每个 Δt 比较脉冲轨迹与有效轨迹的 M_z."""
    result = ExperimentResult(config.experiment)
    couplings = config.couplings.constants()
    observables = Observables(eof=False)
    sampling = config.sampling

    for topo in config.topology.topologies():
        prefix = f"h{topo.n_hydrogens}_"
        if len(config.topology.hydrogens) == 1:
            prefix = ""
        psi0 = config.initial[0].state().members(topo, sampling.ensemble_samples, config.seed)

        reference = run_effective(
            topo,
            couplings,
            psi0,
            sampling.t_total,
            sampling.n_samples,
            convention=config.convention,
            method=sampling.method,
            threads=threads,
        )
        effective_columns = {"time_s": reference.times, **reference.columns()}
        result.add_table(f"fig2_{prefix}effective.csv", effective_columns)

        deviations: list[tuple[float, float]] = []
        for cycle, n_cycles in config.cycle.cycles(config.convention):
            pulsed = run_pulsed(
                topo,
                couplings,
                cycle,
                psi0,
                n_cycles,
                convention=config.convention,
                method=sampling.method,
                observables=observables,
                threads=threads,
            )
            effective = run_effective(
                topo,
                couplings,
                psi0,
                n_cycles * cycle.free_time,
                n_cycles + 1,
                convention=config.convention,
                method=sampling.method,
                observables=observables,
                threads=threads,
            )
            deviation = float(np.max(np.abs(pulsed.mz - effective.mz)))
            deviations.append((cycle.delta_t, deviation))
            logger.info(
                f"{topo.n_hydrogens} H, dt={_label(cycle.delta_t)}: max|dMz|={deviation:.3e}"
            )

            result.add_table(
                f"fig2_{prefix}dt{_label(cycle.delta_t)}.csv",
                {
                    "time_s": pulsed.times,
                    "free_time_s": effective.times,
                    "mz_effective": effective.mz,
                    "mz_pulsed": pulsed.mz,
                },
            )
            total = n_cycles * cycle.cycle_time
            result.checks.append(
                CheckResult.below(
                    f"{prefix}timing_dt{_label(cycle.delta_t)}",
                    abs(total - sampling.t_total) / sampling.t_total,
                    TIMING_REL_TOL,
                    f"wall time {total:.6g}s for {n_cycles} cycles",
                )
            )

        ordered = sorted(deviations, reverse=True)
        values = [deviation for _, deviation in ordered]
        decreasing = all(a > b for a, b in zip(values, values[1:], strict=False))
        result.checks.append(
            CheckResult(
                f"{prefix}convergence_ladder",
                decreasing,
                detail=", ".join(f"{_label(dt)}: {dev:.3e}" for dt, dev in ordered),
            )
        )
        result.checks.append(
            CheckResult.below(f"{prefix}smallest_dt_deviation", values[-1], CONVERGENCE_TOL)
        )
        result.summary.setdefault("max_deviation", {})[str(topo.n_hydrogens)] = {
            _label(dt): dev for dt, dev in ordered
        }
    return result
