"""并发度与形成纠缠测试."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinforge.algebra import DensityMatrix
from spinforge.dynamics import binary_entropy, concurrence, eof

BELL = np.array([1, 0, 0, 1], dtype=np.complex128) / np.sqrt(2)


def werner(p: float) -> np.ndarray:
    return p * np.outer(BELL, BELL.conj()) + (1 - p) * np.eye(4) / 4


class TestConcurrence:
    """Wootters 并发度测试."""

    def test_bell_state(self) -> None:
        rho = DensityMatrix(np.outer(BELL, BELL.conj()), 2)
        assert concurrence(rho) == pytest.approx(1.0, abs=1e-10)
        assert eof(rho) == pytest.approx(1.0, abs=1e-10)

    def test_product_state(self) -> None:
        psi = np.kron([1, 0], [0.6, 0.8]).astype(np.complex128)
        rho = np.outer(psi, psi.conj())
        assert concurrence(rho) == pytest.approx(0.0, abs=1e-10)
        assert eof(rho) == pytest.approx(0.0, abs=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(p=st.floats(0.0, 1.0))
    def test_werner_state(self, p: float) -> None:
        expected = max(0.0, (3 * p - 1) / 2)
        assert concurrence(werner(p)) == pytest.approx(expected, abs=1e-7)
        assert 0.0 <= eof(werner(p)) <= 1.0

    def test_maximally_mixed_is_separable(self) -> None:
        assert concurrence(DensityMatrix.maximally_mixed(2)) == pytest.approx(0.0)

    def test_shape_checked(self) -> None:
        with pytest.raises(ValueError, match="4x4"):
            concurrence(np.eye(2) / 2)

    def test_negative_eigenvalue_rejected(self) -> None:
        with pytest.raises(ValueError, match="non-physical"):
            concurrence(np.diag([1.1, -0.1, 0.0, 0.0]))


class TestBinaryEntropy:
    """二元熵测试."""

    @pytest.mark.parametrize(("p", "expected"), [(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)])
    def test_values(self, p: float, expected: float) -> None:
        assert binary_entropy(p) == pytest.approx(expected)

    def test_symmetric(self) -> None:
        assert binary_entropy(0.2) == pytest.approx(binary_entropy(0.8))
