"""链拓扑与哈密顿量构造测试."""

from __future__ import annotations

import math

import numpy as np
import pytest

from spinforge.algebra import OperatorSum, SpinConvention, StateVector, TimeEvolution, spin_term
from spinforge.model import (
    CARBON_SITE,
    ChainTopology,
    CouplingConstants,
    ZeemanParams,
    build_effective_hamiltonian,
    build_natural_hamiltonian,
    build_zeeman,
    total_z,
)
from tests.conftest import dense_operator

COUPLINGS = CouplingConstants.from_effective(550.0, 980.0)


class TestChainTopology:
    """ChainTopology 测试."""

    def test_site_numbering(self) -> None:
        topo = ChainTopology(3)
        assert topo.n_sites == 7
        assert topo.hydrogen_site("a", 1) == 1
        assert topo.hydrogen_site("a", 3) == 3
        assert topo.hydrogen_site("b", 1) == 4
        assert topo.carbon_bonds() == [(CARBON_SITE, 1), (CARBON_SITE, 4)]
        assert topo.hydrogen_bonds() == [(1, 2), (2, 3), (4, 5), (5, 6)]

    def test_from_total_hydrogens(self) -> None:
        assert ChainTopology.from_total_hydrogens(12).n_per_chain == 6
        with pytest.raises(ValueError, match="even"):
            ChainTopology.from_total_hydrogens(7)

    def test_invalid_size(self) -> None:
        with pytest.raises(ValueError, match="n_per_chain"):
            ChainTopology(0)

    def test_hydrogen_index_range(self) -> None:
        with pytest.raises(ValueError, match="outside"):
            ChainTopology(2).hydrogen_site("a", 3)


class TestCouplings:
    """耦合常数测试."""

    def test_effective_round_trip(self) -> None:
        assert COUPLINGS.j_ch == pytest.approx(2200.0)
        assert COUPLINGS.j_ch_eff == pytest.approx(550.0)
        assert COUPLINGS.j_hh_eff == pytest.approx(980.0)

    def test_non_finite_rejected(self) -> None:
        with pytest.raises(ValueError, match="finite"):
            CouplingConstants(math.nan, 1.0)

    def test_zeeman_rejects_non_positive_frequency(self) -> None:
        with pytest.raises(ValueError, match="omega1"):
            ZeemanParams(0.0)


class TestHamiltonians:
    """哈密顿量测试."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_natural_term_count(self, n: int) -> None:
        h = build_natural_hamiltonian(ChainTopology(n), COUPLINGS)
        assert len(h) == 2 + 6 * (n - 1)
        assert h.is_hermitian()

    def test_zero_couplings_drop_blocks(self) -> None:
        h = build_natural_hamiltonian(ChainTopology(3), CouplingConstants(0.0, 1.0))
        assert len(h) == 12
        h = build_natural_hamiltonian(ChainTopology(3), CouplingConstants(1.0, 0.0))
        assert len(h) == 2

    def test_natural_hamiltonian_cannot_flip_carbon(self) -> None:
        topo = ChainTopology(2)
        h = build_natural_hamiltonian(topo, COUPLINGS)
        carbon_z = dense_operator(OperatorSum.single(topo.n_sites, CARBON_SITE, "Z"))
        dense = dense_operator(h)
        assert np.allclose(dense @ carbon_z, carbon_z @ dense)

    @pytest.mark.parametrize("convention", list(SpinConvention))
    def test_effective_conserves_total_z(self, convention: SpinConvention) -> None:
        topo = ChainTopology(2)
        h = dense_operator(build_effective_hamiltonian(topo, COUPLINGS, convention))
        mz = dense_operator(total_z(topo.n_sites))
        assert np.max(np.abs(h @ mz - mz @ h)) < 1e-9

    def test_effective_coefficients_spin_half(self) -> None:
        h = build_effective_hamiltonian(ChainTopology(1), COUPLINGS)
        coefficients = h.coefficient_map()
        assert coefficients[((0, "Z"), (1, "Z"))] == pytest.approx(2 * 550.0 / 4)
        assert coefficients[((0, "X"), (1, "X"))] == pytest.approx(550.0 / 4)

    @pytest.mark.parametrize(
        ("convention", "factor"), [(SpinConvention.SPIN_HALF, 1.0), (SpinConvention.PAULI, 0.25)]
    )
    def test_exchange_transfer_time(self, convention: SpinConvention, factor: float) -> None:
        j = 700.0
        h = OperatorSum(
            (
                spin_term(j, {0: "X", 1: "X"}, convention),
                spin_term(j, {0: "Y", 1: "Y"}, convention),
            ),
            2,
            convention,
        )
        psi = StateVector.basis([1, 0]).amplitudes
        out = TimeEvolution(h).evolve(psi, factor * math.pi / j)
        assert abs(out[2]) == pytest.approx(1.0, abs=1e-10)

    def test_zeeman_ground_state_is_zero(self) -> None:
        h1 = build_zeeman(ZeemanParams(1.0, hbar=1.0))
        dense = h1.to_dense()
        assert dense[0, 0] < dense[1, 1]
        assert dense[1, 1] - dense[0, 0] == pytest.approx(0.5)
