import numpy as np
import pytest

from oscbath.errors import FrequencyImaginary, InvalidModeCount
from oscbath.model import (SystemParams, effective_frequencies, expand_to_phase_space,
                           mode_transform)


def symplectic_form(n):
    s = np.zeros((2 * n, 2 * n))
    for i in range(n):
        s[2 * i, 2 * i + 1] = 1.0
        s[2 * i + 1, 2 * i] = -1.0
    return s


class TestEffectiveFrequencies:
    def test_decoupled(self):
        f = effective_frequencies(SystemParams(n_modes=3))
        assert f.omega_f == 1.0
        assert f.omega_n == 1.0

    def test_coupled(self):
        f = effective_frequencies(SystemParams(n_modes=3, coupling=0.8))
        assert f.omega_f == pytest.approx(np.sqrt(0.2), abs=1e-12)
        assert f.omega_n == pytest.approx(np.sqrt(2.6), abs=1e-12)
        assert f.omega_f == pytest.approx(0.447214, abs=1e-6)
        assert f.omega_n == pytest.approx(1.612452, abs=1e-6)

    def test_critical_coupling_rejected(self):
        with pytest.raises(FrequencyImaginary):
            effective_frequencies(SystemParams(n_modes=2, coupling=1.0))
        with pytest.raises(FrequencyImaginary):
            effective_frequencies(SystemParams(n_modes=4, coupling=1.5))

    def test_frequency_ordering(self):
        # omega_f <= omega <= omega_n for attractive coupling, equal iff zero
        for n, lam in [(2, 0.3), (3, 0.5), (5, 0.1)]:
            f = effective_frequencies(SystemParams(n_modes=n, coupling=lam))
            assert f.omega_f < 1.0 < f.omega_n
        f0 = effective_frequencies(SystemParams(n_modes=4, coupling=0.0))
        assert f0.omega_f == f0.omega_n == 1.0

    def test_mass_scaling(self):
        f = effective_frequencies(SystemParams(n_modes=2, mass=2.0, coupling=0.8))
        assert f.omega_f == pytest.approx(np.sqrt(1.0 - 0.4), abs=1e-12)


class TestSystemParams:
    def test_rejects_single_mode(self):
        with pytest.raises(InvalidModeCount):
            SystemParams(n_modes=1)

    def test_rejects_nonpositive_mass_and_omega(self):
        with pytest.raises(ValueError):
            SystemParams(n_modes=2, mass=0.0)
        with pytest.raises(ValueError):
            SystemParams(n_modes=2, omega=-1.0)


class TestModeTransform:
    def test_two_modes(self):
        t = mode_transform(2).matrix
        assert np.allclose(t[0], [1 / np.sqrt(2), -1 / np.sqrt(2)], atol=1e-15)
        assert np.allclose(t[1], [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)

    def test_three_modes_first_row(self):
        t = mode_transform(3).matrix
        assert np.allclose(t[0], np.sqrt(2.0 / 3.0) * np.array([1.0, -0.5, -0.5]),
                           atol=1e-15)

    @pytest.mark.parametrize("n", [2, 3, 5, 10])
    def test_orthogonality(self, n):
        t = mode_transform(n).matrix
        assert np.max(np.abs(t @ t.T - np.eye(n))) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 7])
    def test_last_row_symmetric(self, n):
        t = mode_transform(n).matrix
        assert np.allclose(t[-1], np.full(n, 1 / np.sqrt(n)), atol=1e-15)

    def test_rejects_single_mode(self):
        with pytest.raises(InvalidModeCount):
            mode_transform(1)


class TestPhaseSpaceExpansion:
    @pytest.mark.parametrize("n", [2, 3, 6])
    def test_orthogonal(self, n):
        s = expand_to_phase_space(mode_transform(n))
        assert np.max(np.abs(s @ s.T - np.eye(2 * n))) < 1e-12

    def test_vacuum_invariant(self):
        s = expand_to_phase_space(mode_transform(3))
        vac = 0.5 * np.eye(6)
        assert np.max(np.abs(s @ vac @ s.T - vac)) < 1e-14

    def test_round_trip(self):
        rng = np.random.RandomState(7)
        s = expand_to_phase_space(mode_transform(3))
        v = rng.rand(6, 6)
        v = v + v.T
        back = s.T @ (s @ v @ s.T) @ s
        assert np.max(np.abs(back - v)) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_preserves_symplectic_form(self, n):
        s = expand_to_phase_space(mode_transform(n))
        sig = symplectic_form(n)
        assert np.max(np.abs(s @ sig @ s.T - sig)) < 1e-12
