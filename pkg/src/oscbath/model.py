"""System parameters, effective mode frequencies, and the collective-mode transform.

A chain of N identical oscillators with bilinear position-position coupling
decouples, under an orthogonal change of coordinates, into N - 1 degenerate
modes at frequency omega_f that never see the reservoir and one collective
(center-of-mass) mode at omega_n that carries all of the damping.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FrequencyImaginary, InvalidModeCount


@dataclass(frozen=True)
class SystemParams:
    """Oscillator network parameters.

    ``coupling`` is the position-position coupling constant between every
    oscillator pair, in units of mass * omega**2 (the config-file key for it
    is ``lambda``).
    """
    n_modes: int
    mass: float = 1.0
    omega: float = 1.0
    coupling: float = 0.0

    def __post_init__(self):
        if self.n_modes < 2:
            raise InvalidModeCount(f"need at least 2 modes, got {self.n_modes}")
        if self.mass <= 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")


@dataclass(frozen=True)
class EffectiveFrequencies:
    """Frequencies of the decoupled modes.

    omega_f: the N - 1 relaxation-free modes; omega_n: the damped collective mode.
    """
    omega_f: float
    omega_n: float


@dataclass(frozen=True)
class ModeTransform:
    """Orthogonal N x N matrix mapping bare positions to collective coordinates.

    The same matrix acts on the momenta. The last row is the uniform
    symmetric combination 1/sqrt(N).
    """
    matrix: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0]


def effective_frequencies(params: SystemParams) -> EffectiveFrequencies:
    """Frequencies of the relaxation-free and collective modes.

    omega_f**2 = omega**2 - coupling/mass (degenerate, multiplicity N-1) and
    omega_n**2 = omega**2 + (N-1)*coupling/mass. Raises FrequencyImaginary
    when either radicand is non-positive (the network has no stable normal
    modes there).
    """
    m, w, lam = params.mass, params.omega, params.coupling
    rad_f = w * w - lam / m
    rad_n = w * w + (params.n_modes - 1) * lam / m
    if rad_f <= 0.0 or rad_n <= 0.0:
        raise FrequencyImaginary(
            f"radicands omega_f^2={rad_f:g}, omega_n^2={rad_n:g} must be positive")
    return EffectiveFrequencies(omega_f=float(np.sqrt(rad_f)),
                                omega_n=float(np.sqrt(rad_n)))


def mode_transform(n_modes: int) -> ModeTransform:
    """Orthogonal transform to collective coordinates.

    Row k (1-based, k < N) is sqrt((N-k)/(N-k+1)) * [e_k - (1/(N-k)) * sum_{j>k} e_j];
    row N is the uniform 1/sqrt(N) combination.
    """
    if n_modes < 2:
        raise InvalidModeCount(f"need at least 2 modes, got {n_modes}")
    n = n_modes
    t = np.zeros((n, n))
    for k in range(1, n):
        scale = np.sqrt((n - k) / (n - k + 1.0))
        t[k - 1, k - 1] = scale
        t[k - 1, k:] = -scale / (n - k)
    t[n - 1, :] = 1.0 / np.sqrt(n)
    return ModeTransform(matrix=t)


def expand_to_phase_space(transform: ModeTransform) -> np.ndarray:
    """Lift the N x N mode transform to the 2N x 2N phase-space matrix S.

    Phase-space ordering is (q1, p1, ..., qN, pN); S applies the transform
    to positions and momenta alike, so V_transformed = S @ V_bare @ S.T and
    S preserves the symplectic form.
    """
    t = transform.matrix
    n = t.shape[0]
    s = np.zeros((2 * n, 2 * n))
    s[0::2, 0::2] = t
    s[1::2, 1::2] = t
    return s


def symplectic_form(n_modes: int) -> np.ndarray:
    """The 2N x 2N symplectic form, [[0, 1], [-1, 0]] per mode."""
    sig = np.zeros((2 * n_modes, 2 * n_modes))
    for i in range(n_modes):
        sig[2 * i, 2 * i + 1] = 1.0
        sig[2 * i + 1, 2 * i] = -1.0
    return sig
