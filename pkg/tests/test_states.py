import numpy as np
import pytest

from oscbath.dynamics import TRANSFORMED
from oscbath.errors import UnsupportedModeCount
from oscbath.states import (
    AsymmetricStateSpec,
    GhzStateSpec,
    asymmetric_initial_covariance,
    ghz_initial_covariance,
    write_covariance_csv,
)


class TestGhzState:
    def test_zero_squeezing_is_vacuum(self):
        state = ghz_initial_covariance(GhzStateSpec(3, 0.0))
        assert np.allclose(state.matrix, 0.5 * np.eye(6), atol=1e-15)

    def test_three_mode_diagonal(self):
        r = 1.0
        state = ghz_initial_covariance(GhzStateSpec(3, r))
        lo, hi = 0.5 * np.exp(-2 * r), 0.5 * np.exp(2 * r)
        expected = np.diag([lo, hi, lo, hi, hi, lo])
        assert np.allclose(state.matrix, expected, rtol=1e-14)
        assert state.matrix[0, 0] == pytest.approx(0.06766764161830635, rel=1e-12)

    def test_two_mode_diagonal(self):
        r = 0.7
        state = ghz_initial_covariance(GhzStateSpec(2, r))
        lo, hi = 0.5 * np.exp(-2 * r), 0.5 * np.exp(2 * r)
        expected = np.diag([lo, hi, hi, lo])
        assert np.allclose(state.matrix, expected, rtol=1e-14)

    @pytest.mark.parametrize("n", [2, 3])
    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_pure_and_physical(self, n, r):
        state = ghz_initial_covariance(GhzStateSpec(n, r))
        det = np.linalg.det(state.matrix)
        assert det == pytest.approx(0.25**n, rel=1e-8)
        assert state.min_physical_eig() > -1e-10

    def test_starts_at_zero_in_transformed_basis(self):
        state = ghz_initial_covariance(GhzStateSpec(3, 1.0))
        assert state.time == 0.0
        assert state.basis == TRANSFORMED

    @pytest.mark.parametrize("n", [1, 4, 5])
    def test_unsupported_mode_count(self, n):
        with pytest.raises(UnsupportedModeCount):
            GhzStateSpec(n, 1.0)


class TestAsymmetricState:
    def test_combined_squeezing_parameters(self):
        spec = AsymmetricStateSpec(0.8, 0.8)
        assert spec.r_bar == pytest.approx(2.4, rel=1e-12)
        assert spec.q == pytest.approx(3.0, rel=1e-12)

    def test_vacuum_limit(self):
        state = asymmetric_initial_covariance(AsymmetricStateSpec(0.0, 0.0))
        assert np.allclose(state.matrix, 0.5 * np.eye(6), atol=1e-14)

    def test_equal_squeezing_collective_elements(self):
        r = 0.8
        v = asymmetric_initial_covariance(AsymmetricStateSpec(r, r)).matrix
        assert v[4, 4] == pytest.approx(0.5 * np.exp(4 * r), rel=1e-10)
        assert v[4, 4] == pytest.approx(12.266265097569274, rel=1e-10)
        assert v[5, 5] == pytest.approx(0.5 * np.exp(-4 * r), rel=1e-10)
        assert abs(v[0, 2]) < 1e-12

    @pytest.mark.parametrize("r0,rs", [(1.0, 1.489), (0.3, 0.9), (2.0, 0.5)])
    def test_pure_and_physical(self, r0, rs):
        state = asymmetric_initial_covariance(AsymmetricStateSpec(r0, rs))
        det = np.linalg.det(state.matrix)
        assert det == pytest.approx(0.25**3, rel=1e-10)
        assert state.min_physical_eig() > -1e-10

    def test_cross_correlation_ratios(self):
        v = asymmetric_initial_covariance(AsymmetricStateSpec(1.0, 1.489)).matrix
        assert v[2, 4] == pytest.approx(np.sqrt(3.0) * v[0, 4], rel=1e-12)
        assert v[3, 5] == pytest.approx(np.sqrt(3.0) * v[1, 5], rel=1e-12)

    def test_equal_squeezing_swap_symmetry(self):
        # with homogeneous squeezing nothing distinguishes the two
        # relaxation-free modes, so swapping them is a symmetry
        v = asymmetric_initial_covariance(AsymmetricStateSpec(0.8, 0.8)).matrix
        swap = np.eye(6)
        swap[[0, 1, 2, 3]] = swap[[2, 3, 0, 1]]
        assert np.allclose(swap @ v @ swap.T, v, atol=1e-14)

    def test_basis_and_time(self):
        state = asymmetric_initial_covariance(AsymmetricStateSpec(1.0, 1.0))
        assert state.basis == TRANSFORMED
        assert state.time == 0.0


class TestCovarianceCsv:
    def test_header_and_roundtrip(self, tmp_path):
        state = ghz_initial_covariance(GhzStateSpec(3, 1.0))
        path = tmp_path / "state.csv"
        write_covariance_csv(state, path)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("#")
        assert "basis=transformed" in lines[0]
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert data.shape == (6, 6)
        assert np.allclose(data, state.matrix, rtol=0, atol=0)

    def test_deterministic(self, tmp_path):
        state = asymmetric_initial_covariance(AsymmetricStateSpec(1.0, 1.489))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_covariance_csv(state, a)
        write_covariance_csv(state, b)
        assert a.read_bytes() == b.read_bytes()
