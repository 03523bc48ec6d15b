"""带符号温度的热态与单热库量子热机."""

from spinforge.thermo.gibbs import (
    InverseTemperature,
    MachineUnitary,
    machine_unitary,
    thermal_state,
    transition_probability,
)
from spinforge.thermo.machine import (
    MachineMode,
    MachineRecord,
    MachineRun,
    MachineSetup,
    StrokeKind,
    StrokeRecord,
    closed_form_work,
    energy_gap,
    run_machine,
    settled_ledger_gap,
    work_and_heat,
)

__all__ = [
    "InverseTemperature",
    "MachineMode",
    "MachineRecord",
    "MachineRun",
    "MachineSetup",
    "MachineUnitary",
    "StrokeKind",
    "StrokeRecord",
    "closed_form_work",
    "energy_gap",
    "machine_unitary",
    "run_machine",
    "settled_ledger_gap",
    "thermal_state",
    "transition_probability",
    "work_and_heat",
]
