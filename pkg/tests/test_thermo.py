"""吉布斯态与单热库热机测试."""

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from spinforge.algebra import DensityMatrix, OperatorSum, SpinConvention
from spinforge.model import ChainTopology, CouplingConstants, ZeemanParams, build_zeeman
from spinforge.pulses import PulseCycle
from spinforge.thermo import (
    InverseTemperature,
    MachineMode,
    MachineSetup,
    MachineUnitary,
    closed_form_work,
    energy_gap,
    machine_unitary,
    run_machine,
    settled_ledger_gap,
    thermal_state,
    transition_probability,
    work_and_heat,
)
from spinforge.thermo.gibbs import check_unitary
from tests.conftest import PAULI

ZEEMAN = ZeemanParams(2.0, hbar=1.0)


@pytest.fixture
def h1() -> OperatorSum:
    return build_zeeman(ZEEMAN)


class TestInverseTemperature:
    """InverseTemperature 测试."""

    def test_signed_beta(self) -> None:
        beta = InverseTemperature.from_energy_ratio(-2.0, 4.0)
        assert beta.beta == pytest.approx(-0.5)
        assert beta.is_negative
        assert beta.temperature < 0

    def test_infinite_temperature(self) -> None:
        assert InverseTemperature(0.0).temperature == math.inf

    def test_invalid(self) -> None:
        with pytest.raises(ValueError, match="zero temperature"):
            InverseTemperature.from_temperature(0.0)
        with pytest.raises(ValueError, match="finite"):
            InverseTemperature(math.inf)
        with pytest.raises(ValueError, match="reference energy"):
            InverseTemperature.from_energy_ratio(1.0, 0.0)


class TestGibbs:
    """吉布斯态与机器幺正测试."""

    def test_gap(self, h1: OperatorSum) -> None:
        assert energy_gap(h1) == pytest.approx(1.0)

    def test_positive_beta_favours_ground(self, h1: OperatorSum) -> None:
        populations = thermal_state(h1, 2.0).populations()
        assert populations[0] > populations[1]
        assert populations.sum() == pytest.approx(1.0)

    def test_negative_beta_inverts_populations(self, h1: OperatorSum) -> None:
        populations = thermal_state(h1, InverseTemperature(-2.0)).populations()
        assert populations[1] == pytest.approx(1 / (1 + math.exp(-2.0)))

    def test_large_beta_does_not_overflow(self, h1: OperatorSum) -> None:
        populations = thermal_state(h1, -5000.0).populations()
        assert populations[1] == pytest.approx(1.0)

    def test_multi_site_hamiltonian_rejected(self) -> None:
        with pytest.raises(ValueError, match="single-site"):
            thermal_state(build_zeeman(ZEEMAN, n_sites=2), 1.0)

    @pytest.mark.parametrize(
        ("name", "xi"),
        [
            (MachineUnitary.UX, 0.5),
            (MachineUnitary.UY, 0.5),
            (MachineUnitary.UPI, 1.0),
            (MachineUnitary.UI, 0.0),
        ],
    )
    def test_transition_probabilities(self, name: MachineUnitary, xi: float) -> None:
        assert transition_probability(machine_unitary(name)) == pytest.approx(xi, abs=1e-12)

    def test_identity_stroke_is_minus_identity(self) -> None:
        assert np.allclose(machine_unitary(MachineUnitary.UI), -np.eye(2))

    def test_pauli_convention_doubles_rotation(self) -> None:
        u = machine_unitary(MachineUnitary.UX, SpinConvention.PAULI)
        assert transition_probability(u) == pytest.approx(1.0)

    def test_non_unitary_rejected(self) -> None:
        with pytest.raises(ValueError, match="not unitary"):
            check_unitary(np.array([[1, 1], [0, 1]]))
        with pytest.raises(ValueError, match="single-qubit"):
            transition_probability(np.eye(4))


class TestWorkAndHeat:
    """功与热测试."""

    @settings(max_examples=40, deadline=None)
    @given(beta=st.floats(-5.0, 5.0), theta=st.floats(0.0, 2 * math.pi))
    def test_closed_form(self, beta: float, theta: float) -> None:
        h1 = build_zeeman(ZEEMAN)
        u = expm(-0.5j * theta * PAULI["X"])
        record = work_and_heat(thermal_state(h1, beta), u, h1)
        xi = math.sin(theta / 2) ** 2
        assert record.xi == pytest.approx(xi, abs=1e-12)
        assert record.work == pytest.approx(closed_form_work(beta, 1.0, xi), abs=1e-12)
        assert record.heat == pytest.approx(-record.work, abs=1e-15)

    def test_negative_temperature_extracts_work(self, h1: OperatorSum) -> None:
        record = work_and_heat(thermal_state(h1, -2.0), machine_unitary(MachineUnitary.UPI), h1)
        assert record.work < 0
        assert record.efficiency == pytest.approx(1.0)
        assert record.bloch_after[2] > 0

    def test_identity_has_no_efficiency(self, h1: OperatorSum) -> None:
        record = work_and_heat(thermal_state(h1, -2.0), machine_unitary(MachineUnitary.UI), h1)
        assert record.xi == pytest.approx(0.0)
        assert record.work == pytest.approx(0.0, abs=1e-15)
        assert record.efficiency is None

    def test_non_gibbs_state_rejected(self, h1: OperatorSum) -> None:
        plus = np.full((2, 2), 0.5, dtype=np.complex128)
        with pytest.raises(ValueError, match="Gibbs"):
            work_and_heat(DensityMatrix(plus, 1), np.eye(2), h1)


class TestMachine:
    """热机运行测试."""

    def test_analytic_strokes(self) -> None:
        setup = MachineSetup(InverseTemperature(-2.0), ZEEMAN, MachineUnitary.UX)
        run = run_machine(setup)
        thermalize, unitary, rethermalize = run.strokes
        assert thermalize.energy_start == pytest.approx(-0.5)
        assert unitary.energy_change == pytest.approx(run.record.work)
        assert rethermalize.energy_end == pytest.approx(unitary.energy_start)
        assert run.record.work == pytest.approx(closed_form_work(-2.0, 1.0, 0.5))
        assert run.trajectory is not None
        assert list(run.trajectory.times) == [0.0, 1.0, 2.0, 3.0]

    def test_simulated_requires_chain(self) -> None:
        with pytest.raises(ValueError, match="topology"):
            MachineSetup(
                InverseTemperature(-2.0), ZEEMAN, MachineUnitary.UPI, MachineMode.SIMULATED
            )

    def _simulated(self, unitary: MachineUnitary) -> MachineSetup:
        return MachineSetup(
            InverseTemperature(-2.0),
            ZEEMAN,
            unitary,
            MachineMode.SIMULATED,
            topology=ChainTopology(2),
            couplings=CouplingConstants.from_effective(550.0, 980.0),
            cycle=PulseCycle.four_pulse(1.228e-6, 9.89e-6),
            n_cycles=40,
        )

    def test_simulated_identity_stroke_does_no_work(self) -> None:
        run = run_machine(self._simulated(MachineUnitary.UI))
        assert run.record.work == pytest.approx(0.0, abs=1e-12)
        assert run.record.efficiency is None

    def test_simulated_trajectory_is_concatenated(self) -> None:
        run = run_machine(self._simulated(MachineUnitary.UPI))
        first, second = (segment for _, segment in run.segments)
        trajectory = run.trajectory
        assert trajectory is not None
        assert len(trajectory) == len(first) + len(second) - 1
        assert trajectory.mz[0] == pytest.approx(1.0)
        # U_π 翻转碳自旋
        assert run.record.bloch_after[2] == pytest.approx(-first.mz[-1], abs=1e-10)

    def test_analytic_ledger_closes(self) -> None:
        run = run_machine(MachineSetup(InverseTemperature(-2.0), ZEEMAN, MachineUnitary.UPI))
        assert settled_ledger_gap(run) == pytest.approx(0.0, abs=1e-12)

    def test_simulated_ledger_gap_uses_settled_levels(self) -> None:
        run = run_machine(self._simulated(MachineUnitary.UPI))
        first, second = (segment for _, segment in run.segments)
        expected = abs(second.final_average() - first.final_average()) / abs(
            second.mz[0] - first.mz[-1]
        )
        assert settled_ledger_gap(run) == pytest.approx(expected)

    def test_idle_stroke_has_no_ledger(self) -> None:
        run = run_machine(self._simulated(MachineUnitary.UI))
        with pytest.raises(ValueError, match="does no work"):
            settled_ledger_gap(run)
