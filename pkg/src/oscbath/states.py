"""Initial Gaussian states in the collective-mode basis.

Both families are pure states given directly by closed-form covariance
matrices: the symmetric multimode squeezed state (two- and three-mode), and
the three-mode state squeezed asymmetrically between the collective mode and
the degenerate pair. Purity fixes det V = (1/2)^(2N), which the constructors
are tested against.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import TRANSFORMED, CovarianceState
from .errors import UnsupportedModeCount


@dataclass(frozen=True)
class GhzStateSpec:
    """Symmetric squeezed state: n_modes in {2, 3}, squeezing parameter r."""
    n_modes: int
    r: float

    def __post_init__(self):
        if self.n_modes not in (2, 3):
            raise UnsupportedModeCount(
                f"symmetric squeezed covariance is tabulated for 2 or 3 "
                f"modes, got {self.n_modes}")


@dataclass(frozen=True)
class AsymmetricStateSpec:
    """Three-mode state with pair squeezing r0 and collective squeezing rs."""
    r0: float
    rs: float

    @property
    def r_bar(self) -> float:
        return float(np.sqrt(8.0 * self.r0 ** 2 + self.rs ** 2))

    @property
    def q(self) -> float:
        rb = self.r_bar
        return (8.0 * self.r0 + self.rs) / rb if rb > 0 else 0.0


def ghz_initial_covariance(spec: GhzStateSpec) -> CovarianceState:
    """Covariance of the symmetric squeezed state in the collective basis.

    The transform diagonalizes it: each mode is squeezed by r, with the
    collective mode squeezed in the opposite quadrature to the others.
    """
    r = spec.r
    em, ep = 0.5 * np.exp(-2.0 * r), 0.5 * np.exp(2.0 * r)
    if spec.n_modes == 2:
        v = np.diag([em, ep, ep, em])
    else:
        v = np.diag([em, ep, em, ep, ep, em])
    return CovarianceState(time=0.0, matrix=v, basis=TRANSFORMED)


def asymmetric_initial_covariance(spec: AsymmetricStateSpec) -> CovarianceState:
    """Covariance of the asymmetrically squeezed three-mode state.

    Expressed through the combined squeezing r_bar and the weight q; the
    r_bar -> 0 limit is the vacuum. Unlike the symmetric family this matrix
    has cross-mode correlations in the collective basis.
    """
    r0, rs = spec.r0, spec.rs
    rbar = spec.r_bar
    ch = np.cosh(rbar)
    qsh = spec.q * np.sinh(rbar)
    cm = 3.0 * ch - qsh
    cp = 3.0 * ch + qsh
    v = np.zeros((6, 6))
    v[0, 0] = np.exp(-2.0 * rs) / 24.0 * (9.0 + np.exp(3.0 * rs) * cm)
    v[1, 1] = np.exp(2.0 * rs) / 24.0 * (9.0 + np.exp(-3.0 * rs) * cp)
    v[2, 2] = np.exp(-2.0 * rs) / 8.0 * (1.0 + np.exp(3.0 * rs) * cm)
    v[3, 3] = np.exp(2.0 * rs) / 8.0 * (1.0 + np.exp(-3.0 * rs) * cp)
    v[4, 4] = np.exp(rs) / 6.0 * cp
    v[5, 5] = np.exp(-rs) / 6.0 * cm
    v[0, 2] = v[2, 0] = -np.exp(-2.0 * rs) / (8.0 * np.sqrt(3.0)) \
        * (3.0 - np.exp(3.0 * rs) * cm)
    v[1, 3] = v[3, 1] = -np.exp(2.0 * rs) / (8.0 * np.sqrt(3.0)) \
        * (3.0 - np.exp(-3.0 * rs) * cp)
    sinc = np.sinh(rbar) / rbar if rbar > 0 else 1.0
    v35 = -np.exp(rs) * (r0 - rs) * sinc / np.sqrt(6.0)
    v46 = np.exp(-rs) * (r0 - rs) * sinc / np.sqrt(6.0)
    v[2, 4] = v[4, 2] = v35
    v[3, 5] = v[5, 3] = v46
    v[0, 4] = v[4, 0] = v35 / np.sqrt(3.0)
    v[1, 5] = v[5, 1] = v46 / np.sqrt(3.0)
    return CovarianceState(time=0.0, matrix=v, basis=TRANSFORMED)


def write_covariance_csv(state: CovarianceState, path) -> None:
    """Dump a covariance matrix as CSV, one matrix row per line."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# basis={state.basis} t={repr(float(state.time))}\n")
        for row in state.matrix:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")
