"""热化信道的过程层析实验."""

from __future__ import annotations

import numpy as np
from loguru import logger

from spinforge.config.schema import ExperimentConfig
from spinforge.dynamics.initial import SiteState
from spinforge.experiments.results import CheckResult, ExperimentResult
from spinforge.tomography.channels import thermalization_channel, thermalization_time
from spinforge.tomography.chi import (
    ProcessMatrix,
    kraus_to_chi,
    operator_basis,
    pauli_basis,
    process_fidelity,
    reconstruct_chi,
    relaxation_kraus,
    unitary_channel,
)

COMPLETENESS_TOL = 1e-8
SELF_FIDELITY_TOL = 1e-10
BASIS_CHANGE_TOL = 1e-10
_SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)


def _sanity_checks(config: ExperimentConfig) -> list[CheckResult]:
    """σ_x 幺正信道的秩与两组基之间的换基一致性."""
    basis = operator_basis(config.convention)
    channel = unitary_channel(_SIGMA_X)
    in_operators = reconstruct_chi(channel, basis, seed=config.seed)
    in_paulis = reconstruct_chi(channel, pauli_basis(), seed=config.seed)
    mismatch = float(np.abs(in_paulis.in_basis(basis).chi - in_operators.chi).max())
    return [
        CheckResult(
            "unitary_rank_one",
            in_operators.rank() == 1,
            float(in_operators.rank()),
            1.0,
        ),
        CheckResult.below("basis_change_consistency", mismatch, BASIS_CHANGE_TOL),
    ]


def _chi_summary(process: ProcessMatrix) -> dict[str, object]:
    return {
        "basis": process.basis.name,
        "chi": process.to_pairs(),
        "eigenvalues": process.eigenvalues().tolist(),
        "completeness_residual": process.completeness_residual(),
    }


def _channel_time(config: ExperimentConfig, bath: SiteState) -> float:
    """有效演化信道的时长: 完全热化点或整个窗口."""
    sampling = config.sampling
    if config.tomography.channel_time == "window":
        return sampling.t_total
    return thermalization_time(
        config.topology.topologies()[0],
        config.couplings.constants(),
        bath,
        sampling.t_total,
        sampling.n_samples,
        convention=config.convention,
        method=sampling.method,
    )


def run_tomography(config: ExperimentConfig, threads: int | None = 1) -> ExperimentResult:
    """对每个热库重构 χ，并与完全弛豫的理想 χ 比较."""
    result = ExperimentResult(config.experiment)
    settings = config.tomography
    topo = config.topology.topologies()[0]
    couplings = config.couplings.constants()
    basis = operator_basis(config.convention)
    cycle, n_cycles = config.cycle.cycles(config.convention)[0]

    for bath in settings.baths:
        if settings.propagation == "pulsed":
            channel = thermalization_channel(
                topo,
                couplings,
                bath,
                cycle=cycle,
                n_cycles=n_cycles,
                convention=config.convention,
                method=config.sampling.method,
                n_samples=config.sampling.ensemble_samples,
                seed=config.seed,
                threads=threads,
            )
        else:
            channel = thermalization_channel(
                topo,
                couplings,
                bath,
                t_total=_channel_time(config, bath),
                convention=config.convention,
                method=config.sampling.method,
                n_samples=config.sampling.ensemble_samples,
                seed=config.seed,
                threads=threads,
            )
        process = reconstruct_chi(channel, basis, seed=config.seed)
        ideal = kraus_to_chi(relaxation_kraus(channel.ideal_target), basis)
        fidelity = process_fidelity(process, ideal)
        logger.info(
            f"Bath {bath}: fidelity with relaxation to |{channel.ideal_target}> {fidelity:.5f}"
        )

        name = f"bath_{bath}"
        result.checks.extend(
            [
                CheckResult.above(f"{name}_fidelity", fidelity, settings.fidelity_threshold),
                CheckResult.below(
                    f"{name}_completeness", process.completeness_residual(), COMPLETENESS_TOL
                ),
                CheckResult.below(
                    f"{name}_self_fidelity",
                    abs(process_fidelity(process, process) - 1.0),
                    SELF_FIDELITY_TOL,
                ),
            ]
        )
        result.summary.setdefault("channels", {})[str(bath)] = {
            "duration_s": channel.duration,
            "ideal_target": channel.ideal_target,
            "fidelity": fidelity,
            "reconstructed": _chi_summary(process),
            "ideal": _chi_summary(ideal),
        }

    result.checks.extend(_sanity_checks(config))
    result.summary["n_hydrogens"] = topo.n_hydrogens
    result.summary["propagation"] = settings.propagation
    result.summary["channel_time"] = settings.channel_time
    result.summary["window_s"] = config.sampling.t_total
    return result
