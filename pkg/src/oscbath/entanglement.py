"""Entanglement and squeezing diagnostics.

Two complementary criteria are implemented. The partial-transpose negativity:
the minimum eigenvalue of Gamma_j V Gamma_j + (i/2) sigma, negative exactly
when the state is entangled across the j-th mode transposition. And the
collective-quadrature squeezing witness: the smallest combined variance
var(Xt_i) + var(Yt_j) over pairs of the rotated/squeezed collective
quadratures, below 1 exactly when two-mode squeezing survives.

The squeezing route reports both the closed-form parameter chain
(squeeze_match_params) and a correlation matrix G built by direct moment
propagation under the optimal common single-mode symplectic; the moment route
is authoritative for G because it is exact for any permutation-symmetric
three-mode Gaussian state (see g_matrix).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import mean_occupation
from .dynamics import BARE, TRANSFORMED, CovarianceState
from .errors import BasisMismatch, UnphysicalMoments, WrongModeCount
from .model import symplectic_form

__all__ = [
    "symplectic_form", "to_bare_basis", "negativity", "SqueezeMatchParams",
    "squeeze_match_params", "GMatrix", "g_matrix", "assemble_g",
    "combined_variance", "min_combined_variance", "two_mode_threshold",
    "squeezing_threshold", "EntanglementReport", "entanglement_report",
    "write_report_csv", "VARIANCE_PAIRS",
]

# the 6 ordered quadrature pairings (i, j), 1-based, reported in this order
VARIANCE_PAIRS = ((1, 2), (1, 3), (2, 1), (2, 3), (3, 1), (3, 2))

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def to_bare_basis(v: CovarianceState, s: np.ndarray) -> CovarianceState:
    """Undo the phase-space mode transform S: V_bare = S^T V S."""
    if v.basis != TRANSFORMED:
        raise BasisMismatch("state is already in the bare basis")
    return CovarianceState(time=v.time, matrix=s.T @ v.matrix @ s, basis=BARE)


def negativity(v: CovarianceState, j: int) -> float:
    """Minimum eigenvalue of Gamma_j V Gamma_j + (i/2) sigma for mode j (1-based).

    Negative exactly when the state is entangled across the transposition of
    mode j. Defined on the bare-basis matrix; the basis tag is not enforced
    (evaluating on a transformed-basis matrix tests the collective-mode
    splits instead).
    """
    m = v.matrix
    n = v.n_modes
    if not 1 <= j <= n:
        raise IndexError(f"mode index {j} out of range 1..{n}")
    flip = np.ones(2 * n)
    flip[2 * j - 1] = -1.0
    h = (flip[:, None] * m * flip[None, :]) + 0.5j * symplectic_form(n)
    return float(np.linalg.eigvalsh(h)[0].real)


@dataclass(frozen=True)
class SqueezeMatchParams:
    """Parameters of the two-step squeeze transformation matched to the state.

    r1/phi act on each mode separately, r2/theta on the collective sector;
    the m, f, h values are the intermediate moment combinations the closed
    forms are built from.
    """
    r1: float
    r2: float
    phi: float
    theta: float
    m1: complex
    m2: complex
    m3: float
    m4: float
    f1: complex
    f2: float
    f3: float
    h1: float
    h2: float


def squeeze_match_params(v_bare: CovarianceState) -> SqueezeMatchParams:
    """Closed-form squeeze parameters from the bare three-mode moments.

    Assumes the permutation symmetry of the relaxing network, so the moments
    of modes 1 and 2 represent every pair. Angles come from the principal
    branch; zero-modulus phases default to 0.
    """
    m = v_bare.matrix
    m1 = 0.5 * (m[0, 0] - m[1, 1] - 2j * m[0, 1])
    m2 = m[0, 2] - m[1, 3] - 1j * (m[0, 3] + m[1, 2])
    m3 = m[0, 0] + m[1, 1]
    m4 = m[0, 2] + m[1, 3]
    a1 = abs(m1)
    if m3 <= 2.0 * a1:
        raise UnphysicalMoments(
            f"m3 = {m3:g} must exceed 2|m1| = {2 * a1:g} for a real r1")
    phi = 0.5 * math.atan2(m1.imag, m1.real) if a1 > 0 else 0.0
    e2r1 = math.sqrt((m3 - 2.0 * a1) / (m3 + 2.0 * a1))
    r1 = 0.5 * math.log(e2r1)
    u1, v1 = math.cosh(r1), math.sinh(r1)
    f1 = (m2 * u1 ** 2 + np.conj(m2) * np.exp(4j * phi) * v1 ** 2
          + 2.0 * m4 * np.exp(2j * phi) * u1 * v1)
    f2 = 2.0 * (m2 * np.exp(-2j * phi)).real * u1 * v1 + m4 * (1.0 + 2.0 * v1 ** 2)
    f3 = 4.0 * a1 * u1 * v1 + m3 * (1.0 + 2.0 * v1 ** 2)
    a_f1 = abs(f1)
    theta = 0.5 * math.atan2(f1.imag, f1.real) if a_f1 > 0 else 0.0
    h1 = a_f1 - f2
    h2 = -(a_f1 + f2)
    e2r2 = math.sqrt((abs(h2) + f3) / (abs(h1) + f3))
    r2 = 0.5 * math.log(e2r2)
    return SqueezeMatchParams(r1=r1, r2=r2, phi=phi, theta=theta,
                              m1=complex(m1), m2=complex(m2), m3=float(m3),
                              m4=float(m4), f1=complex(f1), f2=float(f2),
                              f3=float(f3), h1=float(h1), h2=float(h2))


@dataclass(frozen=True)
class GMatrix:
    """Four parameters of the 6x6 correlation matrix of the matched state.

    b/a are twice the per-mode position/momentum variances, d/c twice the
    cross-mode position/momentum covariances; the full matrix has the same
    2x2 block between every mode pair.
    """
    a: float
    b: float
    c: float
    d: float


def _symmetric_blocks(v_bare: CovarianceState) -> tuple[np.ndarray, np.ndarray]:
    """Average per-mode and cross-mode 2x2 blocks of a permutation-symmetric
    three-mode covariance (averaging removes integration-level asymmetry)."""
    m = v_bare.matrix
    d0 = np.zeros((2, 2))
    c0 = np.zeros((2, 2))
    for i in range(3):
        d0 += m[2 * i:2 * i + 2, 2 * i:2 * i + 2]
    for i in range(3):
        for j in range(3):
            if i != j:
                c0 += m[2 * i:2 * i + 2, 2 * j:2 * j + 2]
    d0 /= 3.0
    c0 /= 6.0
    c0 = 0.5 * (c0 + c0.T)
    return d0, c0


def _inv_sqrt_psd(b: np.ndarray) -> np.ndarray:
    w, u = np.linalg.eigh(b)
    return u @ np.diag(1.0 / np.sqrt(w)) @ u.T


def _optimal_local_symplectic(d0: np.ndarray, c0: np.ndarray):
    """Common single-mode symplectic minimizing var(Xt_1) + var(Yt_3).

    The difference quadratures see F = D0 - C0, the collective sum sees
    Th = D0 + 2 C0; the minimum over symplectic L is 2 / smax(F^-1/2 J Th^-1/2),
    attained by L built from the top singular pair. det L = 1 by construction.
    """
    f = d0 - c0
    th = d0 + 2.0 * c0
    fi = _inv_sqrt_psd(f)
    ti = _inv_sqrt_psd(th)
    u_m, sig, vh = np.linalg.svd(fi @ _J2 @ ti)
    s1 = sig[0]
    u = fi @ u_m[:, 0] / math.sqrt(s1)
    v = ti @ vh[0, :] / math.sqrt(s1)
    l_opt = np.array([u, v])  # rows: L^T columns (u | v)
    return 2.0 / s1, l_opt


def g_matrix(v_bare: CovarianceState, params: SqueezeMatchParams) -> GMatrix:
    """Correlation parameters (a, b, c, d) of the squeeze-matched state.

    Computed by direct moment propagation: the per-mode and cross-mode blocks
    of the bare covariance are conjugated by the optimal common single-mode
    symplectic, which is exact for any permutation-symmetric Gaussian state
    and makes the closed-form variance expressions hold with zero cross
    q-p terms. The closed-form parameter chain (``params``) is reported
    alongside for comparison but does not enter the moments.
    """
    d0, c0 = _symmetric_blocks(v_bare)
    _, l_opt = _optimal_local_symplectic(d0, c0)
    w = l_opt @ d0 @ l_opt.T
    cc = l_opt @ c0 @ l_opt.T
    return GMatrix(a=2.0 * w[1, 1], b=2.0 * w[0, 0],
                   c=2.0 * cc[1, 1], d=2.0 * cc[0, 0])


def assemble_g(g: GMatrix, n_modes: int = 3) -> np.ndarray:
    """The full 2N x 2N correlation matrix the four parameters stand for."""
    diag = np.array([[g.b, 0.0], [0.0, g.a]]) / 2.0
    cross = np.array([[g.d, 0.0], [0.0, g.c]]) / 2.0
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for i in range(n_modes):
        for j in range(n_modes):
            out[2 * i:2 * i + 2, 2 * j:2 * j + 2] = diag if i == j else cross
    return out


def combined_variance(g: GMatrix, i: int, j: int) -> float:
    """var(Xt_i) + var(Yt_j) for the collective quadratures; < 1 means squeezed.

    Xt_1, Xt_2 are the normalized mode-difference positions, Xt_3 the
    normalized sum; Yt_k the same for momenta.
    """
    if i == j or i not in (1, 2, 3) or j not in (1, 2, 3):
        raise IndexError(f"need distinct indices in 1..3, got ({i}, {j})")
    var_x = (g.b + 2.0 * g.d) / 2.0 if i == 3 else (g.b - g.d) / 2.0
    var_y = (g.a + 2.0 * g.c) / 2.0 if j == 3 else (g.a - g.c) / 2.0
    return var_x + var_y


def min_combined_variance(g: GMatrix) -> float:
    """The most-squeezed pairing; the entanglement verdict uses this one."""
    return min(combined_variance(g, i, j) for i, j in VARIANCE_PAIRS)


def two_mode_threshold(v: CovarianceState) -> float:
    """Partial-transpose discriminant for the two-mode state; < 0 means the
    bare modes are entangled.

    Evaluated on the transformed-basis matrix, where the two collective modes
    stay uncorrelated along the dynamics; the index pairing across the modes
    makes this the exact bare-basis partial-transpose discriminant
    1/4 + 4 det V - (det A + det B - 2 det C).
    """
    if v.n_modes != 2:
        raise WrongModeCount(f"two-mode criterion on {v.n_modes} modes")
    m = v.matrix
    delta = m[0, 0] * m[3, 3] + m[1, 1] * m[2, 2] - 2.0 * m[0, 1] * m[2, 3]
    return 0.25 + 4.0 * float(np.linalg.det(m)) - delta


def squeezing_threshold(temperature: float, omega: float = 1.0) -> float:
    """Squeezing needed for entanglement to survive equilibration:
    r* = ln(2 nbar + 1) / 2. Zero at zero temperature."""
    nbar = mean_occupation(omega, temperature)
    return 0.5 * math.log(2.0 * nbar + 1.0)


@dataclass(frozen=True)
class EntanglementReport:
    """Both criteria evaluated on one state.

    combined_variances follows VARIANCE_PAIRS order; variance entries are NaN
    when the squeezing analysis does not apply (two-mode states, states
    without the permutation symmetry).
    """
    time: float
    eta: tuple[float, ...]
    combined_variances: tuple[float, ...]
    best_variance: float
    params: SqueezeMatchParams | None = None


_NAN6 = (math.nan,) * 6


def entanglement_report(v: CovarianceState, s: np.ndarray | None = None, *,
                        squeeze_analysis: bool | None = None) -> EntanglementReport:
    """Evaluate negativity (and, for symmetric three-mode states, the
    squeezing witness) on one state.

    If ``s`` is given and the state is in the transformed basis it is mapped
    to the bare basis first; otherwise the matrix is used as-is. The
    squeezing analysis defaults to on for three-mode bare states.
    """
    vb = v
    if s is not None and v.basis == TRANSFORMED:
        vb = to_bare_basis(v, s)
    n = vb.n_modes
    eta = tuple(negativity(vb, j) for j in range(1, n + 1))
    if squeeze_analysis is None:
        squeeze_analysis = n == 3 and vb.basis == BARE
    params = None
    variances = _NAN6
    best = math.nan
    if squeeze_analysis:
        if n != 3:
            raise WrongModeCount("squeezing analysis needs a three-mode state")
        try:
            params = squeeze_match_params(vb)
            g = g_matrix(vb, params)
            variances = tuple(combined_variance(g, i, j)
                              for i, j in VARIANCE_PAIRS)
            best = min(variances)
        except UnphysicalMoments:
            params = None
    return EntanglementReport(time=v.time, eta=eta,
                              combined_variances=variances,
                              best_variance=best, params=params)


def write_report_csv(reports, path) -> None:
    """Dump reports as CSV: t, eta_j, var_min, per-pair variances, squeeze
    parameters. Missing values are written as nan."""
    reports = list(reports)
    if not reports:
        raise ValueError("no reports to write")
    n = len(reports[0].eta)
    header = ["t"] + [f"eta_{j}" for j in range(1, n + 1)] + ["var_min"]
    header += [f"var_{i}{j}" for i, j in VARIANCE_PAIRS]
    header += ["r1", "r2", "phi", "theta"]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for rep in reports:
            row = [repr(float(rep.time))]
            row += [repr(float(e)) for e in rep.eta]
            row.append(repr(float(rep.best_variance)))
            row += [repr(float(x)) for x in rep.combined_variances]
            if rep.params is None:
                row += ["nan"] * 4
            else:
                p = rep.params
                row += [repr(float(x)) for x in (p.r1, p.r2, p.phi, p.theta)]
            fh.write(",".join(row) + "\n")
