"""Reservoir spectral density, memory kernels, and master-equation coefficients.

The reservoir is characterized by a Gaussian-cutoff power-law spectral density.
The dissipation kernel (odd) and noise kernel (even) are frequency integrals
over that density; the four time-dependent coefficients of the collective
mode's equation of motion are cumulative time integrals of the kernels against
sin/cos at the collective frequency.

Both kernels decay on the 1/cutoff timescale (thermal case), so the cumulative
integrals plateau early. The table builder evaluates kernels only on a
detected support window, integrates there on a dense sub-grid, and extends the
plateau values to the rest of the grid.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, quad
from scipy.interpolate import CubicSpline

from .errors import GridTooCoarse, QuadratureFailure, TimeOutOfRange
from .model import EffectiveFrequencies

# Quadrature budget for the kernel integrals.
_QUAD_KW = dict(epsabs=1e-10, epsrel=1e-10, limit=400)
# Kernel support detection: stop once |kernel| stays below RELTOL * running
# peak for RUN consecutive sub-grid samples.
_SUPPORT_RELTOL = 1e-15
_SUPPORT_RUN = 40


@dataclass(frozen=True)
class BathSpec:
    """Reservoir parameters.

    gamma0: coupling strength; cutoff: spectral cutoff (units of omega);
    ohmicity: spectral exponent (1 = Ohmic); temperature: in units of
    h-bar * omega / k_B. Zero temperature is allowed (vacuum reservoir).
    """
    gamma0: float = 0.05
    cutoff: float = 100.0
    ohmicity: float = 1.0
    temperature: float = 10.0

    def __post_init__(self):
        if self.gamma0 < 0:
            raise ValueError(f"gamma0 must be nonnegative, got {self.gamma0}")
        if self.cutoff <= 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")
        if self.ohmicity <= 0:
            raise ValueError(f"ohmicity must be positive, got {self.ohmicity}")
        if self.temperature < 0:
            raise ValueError(f"temperature must be nonnegative, got {self.temperature}")
        if self.ohmicity < 1.0 and self.temperature > 0:
            warnings.warn("sub-unit ohmicity with thermal occupation has an "
                          "integrable endpoint divergence; results near t=0 "
                          "carry extra quadrature error", stacklevel=2)


def spectral_density(omega: float, spec: BathSpec, mass: float = 1.0) -> float:
    """J(omega) = (2/pi) gamma0 omega mass (omega/cutoff)^(n-1) exp(-omega^2/cutoff^2)."""
    if omega < 0:
        raise ValueError(f"omega must be nonnegative, got {omega}")
    if omega == 0.0:
        return 0.0 if spec.ohmicity >= 1.0 else np.inf
    x = omega / spec.cutoff
    return (2.0 / np.pi) * spec.gamma0 * omega * mass * x ** (spec.ohmicity - 1.0) \
        * np.exp(-x * x)


def mean_occupation(omega: float, temperature: float) -> float:
    """Bose occupation 1/(exp(omega/T) - 1); zero temperature gives 0."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if temperature < 0:
        raise ValueError(f"temperature must be nonnegative, got {temperature}")
    if temperature == 0.0:
        return 0.0
    return 1.0 / np.expm1(omega / temperature)


def _noise_integrand(omega: float, spec: BathSpec, mass: float) -> float:
    """J(omega) * (1 + 2 Nbar(omega)) with the finite omega -> 0 limit substituted."""
    if omega == 0.0:
        if spec.temperature == 0.0:
            return 0.0
        if spec.ohmicity == 1.0:
            return (4.0 / np.pi) * spec.gamma0 * mass * spec.temperature
        # limit is 0 for n > 1; the n < 1 divergence is integrable and the
        # quadrature never evaluates the closed endpoint itself
        return 0.0
    j = spectral_density(omega, spec, mass)
    if spec.temperature == 0.0:
        return j
    return j * (1.0 + 2.0 * mean_occupation(omega, spec.temperature))


def _weighted_quad(func, weight: str, t: float, spec: BathSpec) -> float:
    upper = 8.0 * spec.cutoff
    res = quad(func, 0.0, upper, weight=weight, wvar=t, full_output=1, **_QUAD_KW)
    if len(res) > 3:
        # QUADPACK flags "roundoff error detected" once the requested
        # absolute tolerance drops below machine precision of the integrand,
        # which happens for strongly coupled baths where the kernels are
        # large.  The returned estimate is still fine as long as the achieved
        # error is small on the natural kernel scale (gamma0 * cutoff).
        value, abserr = res[0], res[1]
        scale = max(1.0, spec.gamma0 * spec.cutoff)
        if abserr <= max(1e-10 * scale, 1e-8 * abs(value)):
            return value
        raise QuadratureFailure(f"kernel quadrature at t={t:g}: {res[3]}")
    return res[0]


def dissipation_kernel(t: float, spec: BathSpec, mass: float = 1.0) -> float:
    """Memory-friction kernel: integral of J(omega) sin(omega t) over frequency."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if t == 0.0 or spec.gamma0 == 0.0:
        return 0.0
    return _weighted_quad(lambda w: spectral_density(w, spec, mass), "sin", t, spec)


def noise_kernel(t: float, spec: BathSpec, mass: float = 1.0) -> float:
    """Thermal noise kernel: integral of J(omega) (1 + 2 Nbar(omega)) cos(omega t)."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if spec.gamma0 == 0.0:
        return 0.0
    return _weighted_quad(lambda w: _noise_integrand(w, spec, mass), "cos", t, spec)


@dataclass(frozen=True)
class CoefficientTable:
    """Time-dependent coefficients of the collective mode, sampled on a uniform grid.

    Arrays hold the frequency-shift term omega_shift_sq, the dissipation rate
    gamma_n, and the diffusion coefficients d_n and f_n. All four vanish at
    t = 0. ``evaluate`` interpolates with a cubic spline built on the dense
    kernel-resolving sub-grid, so interpolation error stays below the 1e-8
    budget needed by the integrator stages.
    """
    t_grid: np.ndarray
    omega_shift_sq: np.ndarray
    gamma_n: np.ndarray
    d_n: np.ndarray
    f_n: np.ndarray
    omega_n: float
    mass: float
    _dense: dict = field(repr=False, compare=False, default_factory=dict)

    @property
    def t_max(self) -> float:
        return float(self.t_grid[-1])

    @property
    def dt(self) -> float:
        return float(self.t_grid[1] - self.t_grid[0])

    def _check_time(self, t: float) -> None:
        if t < -1e-12 or t > self.t_max + 1e-12:
            raise TimeOutOfRange(
                f"t={t:g} outside table range [0, {self.t_max:g}]")

    def evaluate(self, t: float) -> tuple[float, float, float, float]:
        """(omega_shift_sq, gamma_n, d_n, f_n) at time t."""
        self._check_time(t)
        tc = min(max(t, 0.0), self._dense["t_end"])
        out = tuple(float(s(tc)) for s in self._dense["splines"])
        return out

    def plateau(self) -> tuple[float, float, float, float]:
        """Late-time constant values of the four coefficients."""
        return (float(self.omega_shift_sq[-1]), float(self.gamma_n[-1]),
                float(self.d_n[-1]), float(self.f_n[-1]))


def _detect_support(kernel_vals: np.ndarray, h: float, min_pts: int) -> int:
    """Index one past the last sample where the kernel is resolvably nonzero."""
    peak = np.max(np.abs(kernel_vals))
    if peak == 0.0:
        return min_pts
    below = np.abs(kernel_vals) < _SUPPORT_RELTOL * peak
    run = 0
    for k in range(len(kernel_vals)):
        run = run + 1 if below[k] else 0
        if k >= min_pts and run >= _SUPPORT_RUN:
            return k + 1
    return len(kernel_vals)


def build_coefficient_table(spec: BathSpec, freqs: EffectiveFrequencies,
                            t_max: float, dt: float,
                            mass: float = 1.0) -> CoefficientTable:
    """Tabulate the four cumulative-integral coefficients on [0, t_max].

    The kernels are sampled on a sub-grid of spacing dt/4 over their detected
    support; the cumulative integrals are composite-Simpson sums there and
    constants beyond. The grid bound rejects spacings that cannot resolve the
    kernel (1/cutoff) or the collective oscillation (1/omega_n).
    """
    if t_max <= 0 or dt <= 0:
        raise ValueError(f"t_max and dt must be positive, got {t_max}, {dt}")
    bound = min(0.1 / spec.cutoff, 0.01 / freqs.omega_n)
    if dt > bound * (1.0 + 1e-12):
        raise GridTooCoarse(f"dt={dt:g} exceeds grid bound {bound:g}")

    n_steps = int(round(t_max / dt))
    t_grid = np.arange(n_steps + 1) * dt
    om_n = freqs.omega_n
    h = dt / 4.0

    # Kernel support: at least 30/cutoff, at most the full window (plus a
    # margin for the zero-temperature algebraic tail, which has no clean
    # cutoff; that case is quantitatively less accurate and documented).
    min_pts = max(int(np.ceil(30.0 / spec.cutoff / h)), 8)
    cap_pts = int(round(min(t_max, 2.0 + 30.0 / spec.cutoff) / h))
    probe = np.arange(cap_pts + 1) * h
    pi_vals = np.empty_like(probe)
    nu_vals = np.empty_like(probe)
    pi_vals[0] = 0.0
    nu_vals[0] = noise_kernel(0.0, spec, mass)
    computed = len(probe)
    for k in range(1, len(probe)):
        pi_vals[k] = dissipation_kernel(probe[k], spec, mass)
        nu_vals[k] = noise_kernel(probe[k], spec, mass)
        if k % _SUPPORT_RUN == 0:
            s_pi = _detect_support(pi_vals[:k + 1], h, min_pts)
            s_nu = _detect_support(nu_vals[:k + 1], h, min_pts)
            if s_pi <= k + 1 - _SUPPORT_RUN and s_nu <= k + 1 - _SUPPORT_RUN:
                computed = k + 1
                break
    # round the dense window up to a whole table step, evaluating the margin
    sup = min(int(np.ceil((computed - 1) / 4.0)) * 4 + 1, len(probe))
    for k in range(computed, sup):
        pi_vals[k] = dissipation_kernel(probe[k], spec, mass)
        nu_vals[k] = noise_kernel(probe[k], spec, mass)
    ts = probe[:sup]
    pi_vals = pi_vals[:sup]
    nu_vals = nu_vals[:sup]

    cos_t = np.cos(om_n * ts)
    sin_t = np.sin(om_n * ts)
    shift = -(2.0 / mass) * cumulative_simpson(cos_t * pi_vals, x=ts, initial=0.0)
    gamma = cumulative_simpson(sin_t * pi_vals, x=ts, initial=0.0) / (mass * om_n)
    d_n = cumulative_simpson(cos_t * nu_vals, x=ts, initial=0.0)
    f_n = -cumulative_simpson(sin_t * nu_vals, x=ts, initial=0.0) / (mass * om_n)

    def extend(dense: np.ndarray) -> np.ndarray:
        out = np.full(n_steps + 1, dense[-1])
        m = min((sup - 1) // 4 + 1, n_steps + 1)
        out[:m] = dense[:4 * m:4]
        return out

    splines = tuple(CubicSpline(ts, y) for y in (shift, gamma, d_n, f_n))
    table = CoefficientTable(
        t_grid=t_grid,
        omega_shift_sq=extend(shift),
        gamma_n=extend(gamma),
        d_n=extend(d_n),
        f_n=extend(f_n),
        omega_n=om_n,
        mass=mass,
    )
    table._dense["splines"] = splines
    table._dense["t_end"] = float(ts[-1])
    return table


def write_coefficient_csv(table: CoefficientTable, path) -> None:
    """Dump the table grid as CSV (t, omega_shift_sq, gamma_n, d_n, f_n)."""
    with open(path, "w", newline="") as fh:
        fh.write("t,omega_shift_sq,gamma_n,d_n,f_n\n")
        for k in range(len(table.t_grid)):
            fh.write(",".join(repr(float(v)) for v in (
                table.t_grid[k], table.omega_shift_sq[k], table.gamma_n[k],
                table.d_n[k], table.f_n[k])) + "\n")
