"""脉冲引擎测试: 四脉冲循环、翻转坐标系平均与循环传播子."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import expm

from spinforge.algebra import EvolutionMethod, OperatorSum, PauliString, SpinConvention
from spinforge.model import (
    ChainTopology,
    CouplingConstants,
    build_effective_hamiltonian,
    build_natural_hamiltonian,
)
from spinforge.pulses import (
    CyclePropagator,
    Pulse,
    PulseAxis,
    PulseCycle,
    average_hamiltonian_zeroth,
    conjugate_string,
    cycle_propagator,
    pulse_unitary,
    schedule,
    toggling_frames,
)
from spinforge.pulses.averaging import conjugation_table
from tests.conftest import PAULI, dense_cycle, dense_operator, kron_sites, random_state

COUPLINGS = CouplingConstants.from_effective(550.0, 980.0)
CONVENTIONS = list(SpinConvention)


class TestPulseCycle:
    """PulseCycle 测试."""

    @pytest.mark.parametrize("convention", CONVENTIONS)
    def test_four_pulse_is_cyclic(self, convention: SpinConvention) -> None:
        cycle = PulseCycle.four_pulse(1e-6, convention=convention)
        assert cycle.is_cyclic(convention)
        for pulse in cycle.pulses:
            assert abs(pulse.bloch_angle(convention)) == pytest.approx(np.pi / 2)

    def test_free_weights(self) -> None:
        cycle = PulseCycle.four_pulse(2e-6)
        assert cycle.free_weights == (0.5, 1.0, 1.0, 1.0, 0.5)
        assert sum(cycle.free_durations) == pytest.approx(cycle.free_time)
        assert cycle.free_time == pytest.approx(8e-6)

    def test_cycle_time_includes_pulses(self) -> None:
        cycle = PulseCycle.four_pulse(1.228e-6, 9.89e-6)
        assert cycle.cycle_time == pytest.approx(4 * (1.228e-6 + 9.89e-6))

    def test_single_pulse_is_not_cyclic(self) -> None:
        cycle = PulseCycle((Pulse(PulseAxis.PLUS_X),), 1e-6)
        assert not cycle.is_cyclic()

    def test_invalid_cycle(self) -> None:
        with pytest.raises(ValueError, match="at least one pulse"):
            PulseCycle((), 1e-6)
        with pytest.raises(ValueError, match="delta_t"):
            PulseCycle.four_pulse(0.0)
        with pytest.raises(ValueError, match="tau_p"):
            Pulse(PulseAxis.PLUS_Y, tau_p=-1.0)

    def test_inverse_undoes_pulse(self) -> None:
        pulse = Pulse(PulseAxis.PLUS_Y)
        product = pulse.inverse().single_site_unitary() @ pulse.single_site_unitary()
        assert np.allclose(product, np.eye(2))

    def test_pulse_unitary_matches_kron(self, rng: np.random.Generator) -> None:
        single = expm(-1j * (np.pi / 4) * PAULI["Y"])
        rotation = pulse_unitary(Pulse(PulseAxis.PLUS_Y), 4)
        expected = kron_sites(dict.fromkeys(range(4), single), 4)
        psi = random_state(rng, 4)
        assert np.allclose(rotation.to_dense(), expected, atol=1e-12)
        assert np.allclose(rotation.apply(psi), expected @ psi, atol=1e-12)

    def test_pulse_unitary_pauli_is_bloch_quarter_turn(self) -> None:
        rotation = pulse_unitary(Pulse(PulseAxis.PLUS_X, np.pi / 4), 1, SpinConvention.PAULI)
        plus_y = rotation.single @ np.array([1, 0], dtype=np.complex128)
        assert abs(plus_y[0]) ** 2 == pytest.approx(0.5)
        assert plus_y[1] / plus_y[0] == pytest.approx(-1j)


class TestSchedule:
    """墙钟计时表测试."""

    @pytest.mark.parametrize(
        ("delta_t_us", "n_cycles"), [(15.10, 100), (1.228, 225), (0.10, 250)]
    )
    def test_reference_cycles_span_ten_ms(self, delta_t_us: float, n_cycles: int) -> None:
        plan = schedule(delta_t_us * 1e-6, 9.89e-6, n_cycles)
        assert plan.total_time == pytest.approx(10e-3, rel=0.01)
        assert plan.wall_times()[-1] == pytest.approx(plan.total_time)
        assert plan.free_times()[-1] == pytest.approx(n_cycles * 4 * delta_t_us * 1e-6)

    def test_invalid_schedule(self) -> None:
        with pytest.raises(ValueError, match="n_cycles"):
            schedule(1e-6, 0.0, 0)


class TestAveraging:
    """翻转坐标系与零阶平均测试."""

    @pytest.mark.parametrize("convention", CONVENTIONS)
    @pytest.mark.parametrize("axis", list(PulseAxis))
    def test_conjugation_table_matches_dense(
        self, axis: PulseAxis, convention: SpinConvention
    ) -> None:
        angle = np.pi / (4 * convention.scale)
        pulse = Pulse(axis, angle)
        u = pulse.single_site_unitary(convention)
        for label, (sign, new_label) in conjugation_table(pulse, convention).items():
            assert np.allclose(u.conj().T @ PAULI[label] @ u, sign * PAULI[new_label])

    def test_conjugate_string_on_two_sites(self) -> None:
        pulse = Pulse(PulseAxis.PLUS_X)
        term = conjugate_string(PauliString.from_map(2.0, {0: "Z", 1: "Y"}), pulse)
        single = pulse.single_site_unitary()
        u = np.kron(single, single)
        expected = u.conj().T @ np.kron(PAULI["Y"], PAULI["Z"]) @ u * 2.0
        assert np.allclose(dense_operator(OperatorSum((term,), 2)), expected)

    def test_quarter_turn_required(self) -> None:
        with pytest.raises(ValueError, match="quarter-turn"):
            conjugation_table(Pulse(PulseAxis.PLUS_X, 0.3))

    def test_toggling_frames_count(self) -> None:
        h = build_natural_hamiltonian(ChainTopology(1), COUPLINGS)
        frames = toggling_frames(h, PulseCycle.four_pulse(1e-6))
        assert [f.index for f in frames] == [0, 1, 2, 3, 4]
        assert frames[0].hamiltonian is h
        assert np.allclose(frames[2].transform(), np.eye(2))

    @pytest.mark.parametrize("convention", CONVENTIONS)
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_average_equals_effective(self, n: int, convention: SpinConvention) -> None:
        topo = ChainTopology(n)
        natural = build_natural_hamiltonian(topo, COUPLINGS, convention)
        cycle = PulseCycle.four_pulse(1e-6, convention=convention)
        averaged = average_hamiltonian_zeroth(natural, cycle, convention)
        effective = build_effective_hamiltonian(topo, COUPLINGS, convention)
        assert averaged.max_coefficient_difference(effective) / COUPLINGS.j_hh < 1e-14

    def test_non_cyclic_sequence_rejected(self) -> None:
        h = build_natural_hamiltonian(ChainTopology(1), COUPLINGS)
        cycle = PulseCycle((Pulse(PulseAxis.PLUS_X), Pulse(PulseAxis.PLUS_Y)), 1e-6)
        with pytest.raises(ValueError, match="cyclic"):
            average_hamiltonian_zeroth(h, cycle)


class TestCyclePropagator:
    """循环传播子测试."""

    @pytest.mark.parametrize("convention", CONVENTIONS)
    def test_dense_matches_oracle(self, convention: SpinConvention) -> None:
        h = build_natural_hamiltonian(ChainTopology(2), COUPLINGS, convention)
        cycle = PulseCycle.four_pulse(5e-6, 1e-6, convention)
        propagator = CyclePropagator(h, cycle, convention, EvolutionMethod.DENSE)
        assert np.max(np.abs(propagator.to_dense() - dense_cycle(h, cycle, convention))) < 1e-10

    def test_factory_builds_same_cycle(self) -> None:
        h = build_natural_hamiltonian(ChainTopology(1), COUPLINGS, SpinConvention.PAULI)
        cycle = PulseCycle.four_pulse(2e-6, convention=SpinConvention.PAULI)
        built = cycle_propagator(h, cycle, SpinConvention.PAULI, EvolutionMethod.DENSE)
        assert isinstance(built, CyclePropagator)
        assert np.max(np.abs(built.to_dense() - dense_cycle(h, cycle, SpinConvention.PAULI))) < 1e-10

    def test_segments_match_dense(self, rng: np.random.Generator) -> None:
        h = build_natural_hamiltonian(ChainTopology(2), COUPLINGS)
        cycle = PulseCycle.four_pulse(5e-6)
        psi = random_state(rng, h.n_sites)
        krylov = CyclePropagator(h, cycle, method=EvolutionMethod.KRYLOV).apply(psi)
        dense = dense_cycle(h, cycle, SpinConvention.SPIN_HALF) @ psi
        assert np.max(np.abs(krylov - dense)) < 1e-10

    def test_state_site_mismatch(self) -> None:
        from spinforge.algebra import StateVector

        h = build_natural_hamiltonian(ChainTopology(1), COUPLINGS)
        propagator = CyclePropagator(h, PulseCycle.four_pulse(1e-6))
        with pytest.raises(ValueError, match="propagator acts on 3 sites"):
            propagator.apply_state(StateVector.basis([0] * 5))

    def test_cycle_converges_to_effective(self) -> None:
        topo = ChainTopology(1)
        h = build_natural_hamiltonian(topo, COUPLINGS)
        h_eff = dense_operator(build_effective_hamiltonian(topo, COUPLINGS))
        errors = []
        for delta_t in (20e-6, 10e-6, 5e-6, 2.5e-6):
            cycle = PulseCycle.four_pulse(delta_t)
            u_cycle = CyclePropagator(h, cycle, method=EvolutionMethod.DENSE).to_dense()
            u_eff = expm(-1j * h_eff * cycle.free_time)
            errors.append(np.linalg.norm(u_cycle - u_eff, 2))
        assert all(b < a / 2 for a, b in zip(errors, errors[1:], strict=False))
