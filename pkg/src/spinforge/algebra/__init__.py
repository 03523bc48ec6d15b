"""自旋代数: 算符与态的表示、无矩阵作用、约化与期望值."""

from spinforge.algebra.convention import DEFAULT_CONVENTION, SpinConvention
from spinforge.algebra.exponential import EvolutionMethod, TimeEvolution, krylov_expmv
from spinforge.algebra.pauli import OperatorSum, PauliString, spin_term
from spinforge.algebra.states import (
    DensityMatrix,
    StateVector,
    apply_local,
    apply_operator,
    expectation,
    partial_trace,
)

__all__ = [
    "DEFAULT_CONVENTION",
    "DensityMatrix",
    "EvolutionMethod",
    "OperatorSum",
    "PauliString",
    "SpinConvention",
    "StateVector",
    "TimeEvolution",
    "apply_local",
    "apply_operator",
    "expectation",
    "krylov_expmv",
    "partial_trace",
    "spin_term",
]
