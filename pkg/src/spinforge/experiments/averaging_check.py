"""零阶平均哈密顿量与有效哈密顿量的逐系数比较."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.config.schema import ExperimentConfig
from spinforge.experiments.results import CheckResult, ExperimentResult
from spinforge.model.hamiltonians import build_effective_hamiltonian, build_natural_hamiltonian
from spinforge.model.topology import ChainTopology, CouplingConstants
from spinforge.pulses.averaging import average_hamiltonian_zeroth
from spinforge.pulses.cycle import PulseCycle

AHT_RESIDUAL_TOL = 1e-14


@dataclass(frozen=True)
class AveragingResidual:
    """单个链长的比较结果.

    Attributes:
        n_per_chain: 每条链氢原子数。
        n_terms: 平均哈密顿量项数。
        residual: 最大系数差除以耦合尺度。
    """

    n_per_chain: int
    n_terms: int
    residual: float


def averaging_residual(
    topo: ChainTopology,
    couplings: CouplingConstants,
    convention: SpinConvention = DEFAULT_CONVENTION,
    delta_t: float = 1e-6,
) -> AveragingResidual:
    natural = build_natural_hamiltonian(topo, couplings, convention)
    cycle = PulseCycle.four_pulse(delta_t, convention=convention)
    averaged = average_hamiltonian_zeroth(natural, cycle, convention)
    effective = build_effective_hamiltonian(topo, couplings, convention)
    scale = max(abs(couplings.j_ch), abs(couplings.j_hh), 1.0)
    difference = averaged.max_coefficient_difference(effective)
    return AveragingResidual(topo.n_per_chain, len(averaged), difference / scale)


def averaging_residuals(
    max_n: int,
    couplings: CouplingConstants,
    convention: SpinConvention = DEFAULT_CONVENTION,
) -> list[AveragingResidual]:
    """N = 1 … max_n 的比较结果."""
    return [
        averaging_residual(ChainTopology(n), couplings, convention) for n in range(1, max_n + 1)
    ]


def run_aht_check(config: ExperimentConfig, threads: int | None = 1) -> ExperimentResult:
    del threads
    couplings = config.couplings.constants()
    result = ExperimentResult(config.experiment)
    residuals = [
        averaging_residual(topo, couplings, config.convention)
        for topo in config.topology.topologies()
    ]
    result.add_table(
        "aht_residuals.csv",
        {
            "n_per_chain": np.array([r.n_per_chain for r in residuals]),
            "n_terms": np.array([r.n_terms for r in residuals]),
            "residual": np.array([r.residual for r in residuals]),
        },
    )
    for r in residuals:
        result.checks.append(
            CheckResult.below(f"aht_residual_n{r.n_per_chain}", r.residual, AHT_RESIDUAL_TOL)
        )
    result.summary["convention"] = str(config.convention)
    return result
