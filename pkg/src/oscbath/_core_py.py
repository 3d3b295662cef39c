"""Pure-Python integration kernels. Mirror of the compiled extension.

Both kernels advance a linear system with fixed-step RK4; time dependence
enters only through coefficient values pre-sampled at the stage times
(grid points and midpoints), so the loops never touch the interpolants.
"""
from __future__ import annotations

import numpy as np


def evolve_lyapunov(v0, n_modes, mass, of2, ends, halves, dt):
    """RK4 on V' = A(t) V + V A(t)^T + D(t) with the mode-diagonal drift.

    ends: (on2, gamma, d, f) arrays at the n+1 grid points; halves: the same
    at the n midpoints. gamma is the full damping coefficient (the p-p drift
    entry is -gamma), on2 the effective squared frequency of the damped mode.
    """
    on2_e, g_e, d_e, f_e = ends
    on2_h, g_h, d_h, f_h = halves
    n_steps = len(on2_h)
    dim = 2 * n_modes
    out = np.empty((n_steps + 1, dim, dim))
    out[0] = v0
    v = np.array(v0, dtype=float)
    inv_m = 1.0 / mass
    mof2 = mass * of2

    def deriv(vm, on2, g, d, f):
        w = np.empty((dim, dim))
        w[0::2] = inv_m * vm[1::2]
        w[1::2] = -mof2 * vm[0::2]
        w[-1] = -mass * on2 * vm[-2] - g * vm[-1]
        k = w + w.T
        k[-2, -1] -= f
        k[-1, -2] -= f
        k[-1, -1] += 2.0 * d
        return k

    for s in range(n_steps):
        k1 = deriv(v, on2_e[s], g_e[s], d_e[s], f_e[s])
        k2 = deriv(v + (0.5 * dt) * k1, on2_h[s], g_h[s], d_h[s], f_h[s])
        k3 = deriv(v + (0.5 * dt) * k2, on2_h[s], g_h[s], d_h[s], f_h[s])
        k4 = deriv(v + dt * k3, on2_e[s + 1], g_e[s + 1], d_e[s + 1], f_e[s + 1])
        v = v + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        out[s + 1] = v
    return out


def evolve_linear(u0, b0, bw, bg, e_f, e_d, ends, halves, dt):
    """RK4 on u' = (b0 + on2(t) bw + gamma(t) bg) u + f(t) e_f + d(t) e_d."""
    on2_e, g_e, d_e, f_e = ends
    on2_h, g_h, d_h, f_h = halves
    n_steps = len(on2_h)
    out = np.empty((n_steps + 1, len(u0)))
    out[0] = u0
    u = np.array(u0, dtype=float)

    def deriv(uv, on2, g, d, f):
        return (b0 + on2 * bw + g * bg) @ uv + f * e_f + d * e_d

    for s in range(n_steps):
        k1 = deriv(u, on2_e[s], g_e[s], d_e[s], f_e[s])
        k2 = deriv(u + (0.5 * dt) * k1, on2_h[s], g_h[s], d_h[s], f_h[s])
        k3 = deriv(u + (0.5 * dt) * k2, on2_h[s], g_h[s], d_h[s], f_h[s])
        k4 = deriv(u + dt * k3, on2_e[s + 1], g_e[s + 1], d_e[s + 1], f_e[s + 1])
        u = u + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        out[s + 1] = u
    return out
