"""碳-氢双链模型与哈密顿量."""

from spinforge.model.hamiltonians import (
    build_effective_hamiltonian,
    build_natural_hamiltonian,
    build_zeeman,
    site_pauli,
    total_z,
)
from spinforge.model.topology import (
    CARBON_SITE,
    ChainTopology,
    CouplingConstants,
    ZeemanParams,
)

__all__ = [
    "CARBON_SITE",
    "ChainTopology",
    "CouplingConstants",
    "ZeemanParams",
    "build_effective_hamiltonian",
    "build_natural_hamiltonian",
    "build_zeeman",
    "site_pauli",
    "total_z",
]
