"""脉冲引擎: 四脉冲循环传播子、翻转坐标系平均与计时表."""

from spinforge.pulses.averaging import (
    TogglingFrame,
    average_hamiltonian_zeroth,
    conjugate,
    conjugate_string,
    toggling_frames,
)
from spinforge.pulses.cycle import (
    CollectiveRotation,
    Pulse,
    PulseAxis,
    PulseCycle,
    pulse_unitary,
)
from spinforge.pulses.propagator import (
    CyclePropagator,
    CycleSchedule,
    cycle_propagator,
    schedule,
)

__all__ = [
    "CollectiveRotation",
    "CyclePropagator",
    "CycleSchedule",
    "Pulse",
    "PulseAxis",
    "PulseCycle",
    "TogglingFrame",
    "average_hamiltonian_zeroth",
    "conjugate",
    "conjugate_string",
    "cycle_propagator",
    "pulse_unitary",
    "schedule",
    "toggling_frames",
]
