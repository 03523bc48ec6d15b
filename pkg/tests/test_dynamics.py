"""初态、时间演化与轨迹测试."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import expm

from spinforge.algebra import OperatorSum, StateVector
from spinforge.dynamics import (
    InitialState,
    Observables,
    SectorSpectrum,
    SiteState,
    Trajectory,
    evolve,
    plateau_mz,
    run_effective,
    run_hamiltonian,
    run_pulsed,
)
from spinforge.model import (
    ChainTopology,
    CouplingConstants,
    build_effective_hamiltonian,
    site_pauli,
)
from spinforge.pulses import PulseCycle
from tests.conftest import dense_operator

COUPLINGS = CouplingConstants.from_effective(550.0, 980.0)


@pytest.fixture
def topo() -> ChainTopology:
    return ChainTopology(2)


class TestInitialState:
    """初态与系综测试."""

    def test_pure_state_bits(self, topo: ChainTopology) -> None:
        psi = InitialState(SiteState.EXCITED, SiteState.GROUND).pure_state(topo)
        assert psi.amplitudes[1] == 1.0
        members = InitialState(SiteState.GROUND, SiteState.EXCITED).members(topo)
        assert len(members) == 1
        assert members[0].amplitudes[0b11110] == 1.0

    def test_mixed_bath_is_deterministic(self, topo: ChainTopology) -> None:
        state = InitialState(SiteState.EXCITED, SiteState.MIXED)
        first = state.members(topo, 16, seed=7)
        second = state.members(topo, 16, seed=7)
        assert len(first) == 16
        for a, b in zip(first, second, strict=True):
            assert np.array_equal(a.amplitudes, b.amplitudes)
        # 碳始终处于 |1⟩
        assert all(np.argmax(np.abs(m.amplitudes)) & 1 for m in first)

    def test_mixed_needs_samples(self, topo: ChainTopology) -> None:
        with pytest.raises(ValueError, match="at least one sample"):
            InitialState(SiteState.EXCITED, SiteState.MIXED).members(topo, 0)

    def test_mixed_site_has_no_bit(self) -> None:
        with pytest.raises(ValueError, match="no definite bit"):
            _ = SiteState.MIXED.bit
        with pytest.raises(ValueError, match="maximally-mixed"):
            InitialState(SiteState.MIXED).pure_state(ChainTopology(1))


class TestTrajectory:
    """Trajectory 测试."""

    def test_times_must_increase(self) -> None:
        with pytest.raises(ValueError, match="strictly increasing"):
            Trajectory(np.array([0.0, 0.0]), np.zeros(2))

    def test_shape_mismatch(self) -> None:
        with pytest.raises(ValueError, match="eof has shape"):
            Trajectory(np.arange(3.0), np.zeros(3), eof=np.zeros(2))

    def test_mz_bound(self) -> None:
        with pytest.raises(ValueError, match="outside"):
            Trajectory(np.arange(2.0), np.array([0.0, 1.1]))

    def test_final_average_and_population(self) -> None:
        traj = Trajectory(np.arange(10.0), np.linspace(-0.9, 0.9, 10))
        assert traj.final_average() == pytest.approx(np.mean(traj.mz[8:]))
        assert traj.excited_population[0] == pytest.approx(0.95)

    def test_columns_and_shift(self) -> None:
        traj = Trajectory(np.arange(3.0), np.zeros(3), eof=np.zeros(3))
        assert set(traj.columns("b_")) == {"b_mz", "b_eof"}
        assert np.array_equal(traj.shifted(5.0).times, np.arange(3.0) + 5.0)


class TestEvolution:
    """演化与采样测试."""

    def test_evolve_matches_expm(self, topo: ChainTopology) -> None:
        h = build_effective_hamiltonian(topo, COUPLINGS)
        psi = InitialState().pure_state(topo)
        out = evolve(psi, h, 1e-3)
        expected = expm(-1j * dense_operator(h) * 1e-3) @ psi.amplitudes
        assert np.max(np.abs(out.amplitudes - expected)) < 1e-10

    def test_evolve_site_mismatch(self, topo: ChainTopology) -> None:
        h = build_effective_hamiltonian(topo, COUPLINGS)
        with pytest.raises(ValueError, match="Hamiltonian acts on 5 sites"):
            evolve(StateVector.basis([0] * 3), h, 1e-3)

    def test_run_hamiltonian_samples(self, topo: ChainTopology) -> None:
        h = build_effective_hamiltonian(topo, COUPLINGS)
        psi = InitialState().pure_state(topo)
        traj = run_hamiltonian(h, psi, 2e-3, 11, observables=Observables(transverse=True))
        dense_h = dense_operator(h)
        z0 = dense_operator(site_pauli(topo.n_sites, 0, "Z"))
        for t, mz in zip(traj.times, traj.mz, strict=True):
            phi = expm(-1j * dense_h * t) @ psi.amplitudes
            assert mz == pytest.approx(float(np.real(phi.conj() @ z0 @ phi)), abs=1e-10)
        assert traj.mz[0] == pytest.approx(-1.0)
        assert np.allclose(traj.mx, 0.0, atol=1e-10)

    def test_invalid_window(self, topo: ChainTopology) -> None:
        psi = InitialState().pure_state(topo)
        h = build_effective_hamiltonian(topo, COUPLINGS)
        with pytest.raises(ValueError, match="t_total"):
            run_hamiltonian(h, psi, 0.0)
        with pytest.raises(ValueError, match="n_samples"):
            run_hamiltonian(h, psi, 1e-3, 1)

    def test_conservation_laws(self, topo: ChainTopology) -> None:
        h = build_effective_hamiltonian(topo, COUPLINGS)
        psi = InitialState().pure_state(topo)
        traj = run_hamiltonian(
            h, psi, 5e-3, 40, observables=Observables(energy=h, total_z=True)
        )
        assert np.ptp(traj.energy) < 1e-8
        assert np.ptp(traj.total_z) < 1e-8

    def test_spin_flip_symmetry(self, topo: ChainTopology) -> None:
        a = InitialState(SiteState.EXCITED, SiteState.GROUND).pure_state(topo)
        b = InitialState(SiteState.GROUND, SiteState.EXCITED).pure_state(topo)
        traj_a = run_effective(topo, COUPLINGS, a, 5e-3, 30)
        traj_b = run_effective(topo, COUPLINGS, b, 5e-3, 30)
        assert np.max(np.abs(traj_a.mz + traj_b.mz)) < 1e-10
        assert np.allclose(traj_a.eof, traj_b.eof, atol=1e-10)

    def test_thread_count_independence(self, topo: ChainTopology) -> None:
        members = InitialState(SiteState.EXCITED, SiteState.MIXED).members(topo, 8, seed=3)
        serial = run_effective(topo, COUPLINGS, members, 5e-3, 20, threads=1)
        parallel = run_effective(topo, COUPLINGS, members, 5e-3, 20, threads=4)
        assert np.max(np.abs(serial.mz - parallel.mz)) < 1e-12
        assert np.max(np.abs(serial.eof - parallel.eof)) < 1e-12

    def test_pulsed_times_are_wall_clock(self, topo: ChainTopology) -> None:
        cycle = PulseCycle.four_pulse(1.228e-6, 9.89e-6)
        psi = InitialState().pure_state(topo)
        traj = run_pulsed(topo, COUPLINGS, cycle, psi, 20)
        assert len(traj) == 21
        assert traj.times[-1] == pytest.approx(20 * cycle.cycle_time)
        assert traj.free_times[-1] == pytest.approx(20 * 4 * 1.228e-6)
        assert len(traj.final_states) == 1

    def test_pulsed_follows_effective(self, topo: ChainTopology) -> None:
        cycle = PulseCycle.four_pulse(0.5e-6)
        psi = InitialState().pure_state(topo)
        pulsed = run_pulsed(topo, COUPLINGS, cycle, psi, 200, observables=Observables(eof=False))
        effective = run_effective(
            topo, COUPLINGS, psi, 200 * cycle.free_time, 201, observables=Observables(eof=False)
        )
        assert np.max(np.abs(pulsed.mz - effective.mz)) < 0.05


class TestPlateau:
    """对角系综平台测试."""

    @pytest.mark.parametrize(("n_per_chain", "expected"), [(3, 0.2245), (5, 0.3118)])
    def test_single_excitation_plateau(self, n_per_chain: int, expected: float) -> None:
        topo = ChainTopology(n_per_chain)
        h = build_effective_hamiltonian(topo, COUPLINGS)
        psi = InitialState(SiteState.EXCITED, SiteState.GROUND).pure_state(topo)
        assert plateau_mz(h, psi) == pytest.approx(expected, abs=1e-3)

    def test_matches_long_time_average(self, topo: ChainTopology) -> None:
        h = build_effective_hamiltonian(topo, COUPLINGS)
        psi = InitialState(SiteState.EXCITED, SiteState.GROUND).pure_state(topo)
        traj = run_hamiltonian(h, psi, 2.0, 4001, observables=Observables(eof=False))
        assert plateau_mz(h, psi) == pytest.approx(float(np.mean(traj.mz)), abs=0.02)

    def test_spin_flip_mirrors_plateau(self, topo: ChainTopology) -> None:
        spectrum = SectorSpectrum(build_effective_hamiltonian(topo, COUPLINGS))
        cold = InitialState(SiteState.EXCITED, SiteState.GROUND).pure_state(topo)
        hot = InitialState(SiteState.GROUND, SiteState.EXCITED).pure_state(topo)
        assert plateau_mz(spectrum, hot) == pytest.approx(-plateau_mz(spectrum, cold), abs=1e-10)

    def test_ensemble_is_member_mean(self, topo: ChainTopology) -> None:
        spectrum = SectorSpectrum(build_effective_hamiltonian(topo, COUPLINGS))
        members = InitialState(SiteState.EXCITED, SiteState.MIXED).members(topo, 6, seed=1)
        each = [spectrum.site_mz(psi) for psi in members]
        assert plateau_mz(spectrum, members) == pytest.approx(float(np.mean(each)))

    def test_stationary_state_is_its_own_plateau(self, topo: ChainTopology) -> None:
        psi = InitialState(SiteState.GROUND, SiteState.GROUND).pure_state(topo)
        assert plateau_mz(build_effective_hamiltonian(topo, COUPLINGS), psi) == pytest.approx(1.0)

    def test_rejects_non_conserving_hamiltonian(self) -> None:
        with pytest.raises(ValueError, match="does not conserve"):
            SectorSpectrum(OperatorSum.single(3, 0, "X"))

    def test_rejects_empty_ensemble(self, topo: ChainTopology) -> None:
        with pytest.raises(ValueError, match="empty"):
            plateau_mz(build_effective_hamiltonian(topo, COUPLINGS), [])
