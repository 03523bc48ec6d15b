"""时间演化、轨迹采样、长时间平台与纠缠度量."""

from spinforge.dynamics.entanglement import binary_entropy, concurrence, eof
from spinforge.dynamics.initial import InitialState, SiteState
from spinforge.dynamics.plateau import SectorSpectrum, plateau_mz
from spinforge.dynamics.trajectory import (
    Observables,
    Trajectory,
    evolve,
    run_effective,
    run_hamiltonian,
    run_propagator,
    run_pulsed,
)

__all__ = [
    "InitialState",
    "Observables",
    "SectorSpectrum",
    "SiteState",
    "Trajectory",
    "binary_entropy",
    "concurrence",
    "eof",
    "evolve",
    "plateau_mz",
    "run_effective",
    "run_hamiltonian",
    "run_propagator",
    "run_pulsed",
]
