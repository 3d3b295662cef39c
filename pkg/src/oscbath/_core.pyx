# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integration kernels; drop-in replacement for oscbath._core_py.

Same fixed-step RK4 schemes, with the inner loops in C. Coefficient values
arrive pre-sampled at the stage times, so the hot path is pure arithmetic.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef void _lyap_rhs(double[:, ::1] v, double[:, ::1] w, double[:, ::1] k,
                    int dim, double inv_m, double mof2, double mass,
                    double on2, double g, double d, double f) noexcept nogil:
    cdef int i, j
    for i in range(0, dim, 2):
        for j in range(dim):
            w[i, j] = inv_m * v[i + 1, j]
            w[i + 1, j] = -mof2 * v[i, j]
    for j in range(dim):
        w[dim - 1, j] = -mass * on2 * v[dim - 2, j] - g * v[dim - 1, j]
    for i in range(dim):
        for j in range(dim):
            k[i, j] = w[i, j] + w[j, i]
    k[dim - 2, dim - 1] -= f
    k[dim - 1, dim - 2] -= f
    k[dim - 1, dim - 1] += 2.0 * d


def evolve_lyapunov(v0, int n_modes, double mass, double of2, ends, halves,
                    double dt):
    on2_e, g_e, d_e, f_e = ends
    on2_h, g_h, d_h, f_h = halves
    cdef double[::1] aon2e = np.ascontiguousarray(on2_e, dtype=np.float64)
    cdef double[::1] age = np.ascontiguousarray(g_e, dtype=np.float64)
    cdef double[::1] ade = np.ascontiguousarray(d_e, dtype=np.float64)
    cdef double[::1] afe = np.ascontiguousarray(f_e, dtype=np.float64)
    cdef double[::1] aon2h = np.ascontiguousarray(on2_h, dtype=np.float64)
    cdef double[::1] agh = np.ascontiguousarray(g_h, dtype=np.float64)
    cdef double[::1] adh = np.ascontiguousarray(d_h, dtype=np.float64)
    cdef double[::1] afh = np.ascontiguousarray(f_h, dtype=np.float64)
    cdef int n_steps = aon2h.shape[0]
    cdef int dim = 2 * n_modes
    out_arr = np.empty((n_steps + 1, dim, dim))
    cdef double[:, :, ::1] out = out_arr
    cdef double[:, ::1] v = np.array(v0, dtype=np.float64)
    cdef double[:, ::1] w = np.empty((dim, dim))
    cdef double[:, ::1] k1 = np.empty((dim, dim))
    cdef double[:, ::1] k2 = np.empty((dim, dim))
    cdef double[:, ::1] k3 = np.empty((dim, dim))
    cdef double[:, ::1] k4 = np.empty((dim, dim))
    cdef double[:, ::1] tmp = np.empty((dim, dim))
    cdef double inv_m = 1.0 / mass
    cdef double mof2 = mass * of2
    cdef int s, i, j
    with nogil:
        for i in range(dim):
            for j in range(dim):
                out[0, i, j] = v[i, j]
        for s in range(n_steps):
            _lyap_rhs(v, w, k1, dim, inv_m, mof2, mass,
                      aon2e[s], age[s], ade[s], afe[s])
            for i in range(dim):
                for j in range(dim):
                    tmp[i, j] = v[i, j] + 0.5 * dt * k1[i, j]
            _lyap_rhs(tmp, w, k2, dim, inv_m, mof2, mass,
                      aon2h[s], agh[s], adh[s], afh[s])
            for i in range(dim):
                for j in range(dim):
                    tmp[i, j] = v[i, j] + 0.5 * dt * k2[i, j]
            _lyap_rhs(tmp, w, k3, dim, inv_m, mof2, mass,
                      aon2h[s], agh[s], adh[s], afh[s])
            for i in range(dim):
                for j in range(dim):
                    tmp[i, j] = v[i, j] + dt * k3[i, j]
            _lyap_rhs(tmp, w, k4, dim, inv_m, mof2, mass,
                      aon2e[s + 1], age[s + 1], ade[s + 1], afe[s + 1])
            for i in range(dim):
                for j in range(dim):
                    v[i, j] = v[i, j] + (dt / 6.0) * (
                        k1[i, j] + 2.0 * (k2[i, j] + k3[i, j]) + k4[i, j])
                    out[s + 1, i, j] = v[i, j]
    return out_arr


cdef void _lin_rhs(double[::1] u, double[::1] k, double[:, ::1] b0,
                   double[:, ::1] bw, double[:, ::1] bg, double[::1] e_f,
                   double[::1] e_d, int n, double on2, double g, double d,
                   double f) noexcept nogil:
    cdef int i, j
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(n):
            acc += (b0[i, j] + on2 * bw[i, j] + g * bg[i, j]) * u[j]
        k[i] = acc + f * e_f[i] + d * e_d[i]


def evolve_linear(u0, b0, bw, bg, e_f, e_d, ends, halves, double dt):
    on2_e, g_e, d_e, f_e = ends
    on2_h, g_h, d_h, f_h = halves
    cdef double[::1] aon2e = np.ascontiguousarray(on2_e, dtype=np.float64)
    cdef double[::1] age = np.ascontiguousarray(g_e, dtype=np.float64)
    cdef double[::1] ade = np.ascontiguousarray(d_e, dtype=np.float64)
    cdef double[::1] afe = np.ascontiguousarray(f_e, dtype=np.float64)
    cdef double[::1] aon2h = np.ascontiguousarray(on2_h, dtype=np.float64)
    cdef double[::1] agh = np.ascontiguousarray(g_h, dtype=np.float64)
    cdef double[::1] adh = np.ascontiguousarray(d_h, dtype=np.float64)
    cdef double[::1] afh = np.ascontiguousarray(f_h, dtype=np.float64)
    cdef double[:, ::1] mb0 = np.ascontiguousarray(b0, dtype=np.float64)
    cdef double[:, ::1] mbw = np.ascontiguousarray(bw, dtype=np.float64)
    cdef double[:, ::1] mbg = np.ascontiguousarray(bg, dtype=np.float64)
    cdef double[::1] mef = np.ascontiguousarray(e_f, dtype=np.float64)
    cdef double[::1] med = np.ascontiguousarray(e_d, dtype=np.float64)
    cdef int n_steps = aon2h.shape[0]
    cdef int n = mb0.shape[0]
    out_arr = np.empty((n_steps + 1, n))
    cdef double[:, ::1] out = out_arr
    cdef double[::1] u = np.array(u0, dtype=np.float64)
    cdef double[::1] k1 = np.empty(n)
    cdef double[::1] k2 = np.empty(n)
    cdef double[::1] k3 = np.empty(n)
    cdef double[::1] k4 = np.empty(n)
    cdef double[::1] tmp = np.empty(n)
    cdef int s, i
    with nogil:
        for i in range(n):
            out[0, i] = u[i]
        for s in range(n_steps):
            _lin_rhs(u, k1, mb0, mbw, mbg, mef, med, n,
                     aon2e[s], age[s], ade[s], afe[s])
            for i in range(n):
                tmp[i] = u[i] + 0.5 * dt * k1[i]
            _lin_rhs(tmp, k2, mb0, mbw, mbg, mef, med, n,
                     aon2h[s], agh[s], adh[s], afh[s])
            for i in range(n):
                tmp[i] = u[i] + 0.5 * dt * k2[i]
            _lin_rhs(tmp, k3, mb0, mbw, mbg, mef, med, n,
                     aon2h[s], agh[s], adh[s], afh[s])
            for i in range(n):
                tmp[i] = u[i] + dt * k3[i]
            _lin_rhs(tmp, k4, mb0, mbw, mbg, mef, med, n,
                     aon2e[s + 1], age[s + 1], ade[s + 1], afe[s + 1])
            for i in range(n):
                u[i] = u[i] + (dt / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i])
                out[s + 1, i] = u[i]
    return out_arr
