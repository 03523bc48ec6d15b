"""单比特过程层析."""

from spinforge.tomography.channels import (
    ThermalizationChannel,
    thermalization_channel,
    thermalization_time,
)
from spinforge.tomography.chi import (
    OperatorBasis,
    ProcessMatrix,
    change_basis,
    kraus_channel,
    kraus_to_chi,
    operator_basis,
    pauli_basis,
    process_fidelity,
    random_density_matrix,
    reconstruct_chi,
    relaxation_kraus,
    unitary_channel,
)

__all__ = [
    "OperatorBasis",
    "ProcessMatrix",
    "ThermalizationChannel",
    "change_basis",
    "kraus_channel",
    "kraus_to_chi",
    "operator_basis",
    "pauli_basis",
    "process_fidelity",
    "random_density_matrix",
    "reconstruct_chi",
    "relaxation_kraus",
    "thermalization_channel",
    "thermalization_time",
    "unitary_channel",
]
