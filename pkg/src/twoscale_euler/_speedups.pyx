# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled stepping kernels; see _kernels_py.py for the reference
implementations these must match."""

from libc.math cimport fabs, sqrt, pow

import numpy as np


cdef inline double _scalar_flux(double q, double alpha, double beta) nogil:
    return alpha * q * q + beta * q


cdef inline double _scalar_iface(double qr, double ql, double alpha,
                                 double beta) nogil:
    return 0.5 * (_scalar_flux(qr, alpha, beta) + _scalar_flux(ql, alpha, beta)) \
        - 0.5 * fabs(alpha * (qr + ql) + beta) * (qr - ql)


def scalar_roe_step(const double[::1] q, double alpha, double beta,
                    double k_over_h, double[::1] out=None):
    cdef Py_ssize_t n = q.shape[0]
    res = np.empty(n, dtype=np.float64) if out is None else None
    cdef double[::1] o = res if out is None else out
    cdef Py_ssize_t i
    cdef double flux_wrap, flux_left, flux_right
    with nogil:
        # interface (n-1, 0) is both the first left flux and the last right
        flux_wrap = _scalar_iface(q[0], q[n - 1], alpha, beta)
        flux_left = flux_wrap
        for i in range(n - 1):
            flux_right = _scalar_iface(q[i + 1], q[i], alpha, beta)
            o[i] = q[i] - k_over_h * (flux_right - flux_left)
            flux_left = flux_right
        o[n - 1] = q[n - 1] - k_over_h * (flux_wrap - flux_left)
    return res if out is None else np.asarray(out)


def scalar_max_speed(const double[::1] q, double alpha, double beta):
    cdef Py_ssize_t n = q.shape[0]
    cdef Py_ssize_t i
    cdef double s, best = 0.0
    with nogil:
        best = fabs(alpha * (q[0] + q[n - 1]) + beta)
        for i in range(1, n):
            s = fabs(alpha * (q[i] + q[i - 1]) + beta)
            if s > best:
                best = s
    return best


cdef void _cell_pressures(const double[::1] density, double gamma,
                          double[::1] p) nogil:
    # pow(x, 1.0) == x exactly, so the gamma = 1 fast path changes nothing
    cdef Py_ssize_t i
    cdef Py_ssize_t n = density.shape[0]
    if gamma == 1.0:
        for i in range(n):
            p[i] = density[i]
    else:
        for i in range(n):
            p[i] = pow(density[i], gamma) / gamma


cdef inline double _p_slope(double rl, double rr, double pl, double pr,
                            double gamma) nogil:
    if rr == rl:
        if gamma == 1.0:
            return 1.0
        return pow(rr, gamma - 1.0)
    return (pr - pl) / (rr - rl)


cdef inline void _direct_iface(double rl, double rr, double ml, double mr,
                               double pl, double pr, double mach, double gamma,
                               double inv_e2, double* flux0,
                               double* flux1) nogil:
    cdef double ul = ml / rl
    cdef double ur = mr / rr
    cdef double sl = sqrt(rl)
    cdef double sr = sqrt(rr)
    cdef double u_hat = (ur * sr + ul * sl) / (sr + sl)
    cdef double drho = rr - rl
    cdef double c_hat = sqrt(_p_slope(rl, rr, pl, pr, gamma)) / mach
    cdef double lam1 = u_hat - c_hat
    cdef double lam2 = u_hat + c_hat
    cdef double dm = mr - ml
    cdef double a1 = (lam2 * drho - dm) / (2.0 * c_hat)
    cdef double a2 = (dm - lam1 * drho) / (2.0 * c_hat)
    cdef double w1 = fabs(lam1) * a1
    cdef double w2 = fabs(lam2) * a2
    flux0[0] = 0.5 * (ml + mr) - 0.5 * (w1 + w2)
    flux1[0] = 0.5 * ((ml * ul + pl * inv_e2) + (mr * ur + pr * inv_e2)) \
        - 0.5 * (w1 * lam1 + w2 * lam2)


def direct_roe_step(const double[::1] density, const double[::1] momentum,
                    double mach, double gamma, double k_over_h):
    cdef Py_ssize_t n = density.shape[0]
    density_new = np.empty(n, dtype=np.float64)
    momentum_new = np.empty(n, dtype=np.float64)
    pressures = np.empty(n, dtype=np.float64)
    cdef double[::1] dn = density_new
    cdef double[::1] mn = momentum_new
    cdef double[::1] p = pressures
    cdef double inv_e2 = 1.0 / (mach * mach)
    cdef Py_ssize_t i
    cdef double fw0, fw1, fl0, fl1, fr0, fr1
    with nogil:
        _cell_pressures(density, gamma, p)
        _direct_iface(density[n - 1], density[0], momentum[n - 1], momentum[0],
                      p[n - 1], p[0], mach, gamma, inv_e2, &fw0, &fw1)
        fl0 = fw0
        fl1 = fw1
        for i in range(n - 1):
            _direct_iface(density[i], density[i + 1], momentum[i],
                          momentum[i + 1], p[i], p[i + 1], mach, gamma,
                          inv_e2, &fr0, &fr1)
            dn[i] = density[i] - k_over_h * (fr0 - fl0)
            mn[i] = momentum[i] - k_over_h * (fr1 - fl1)
            fl0 = fr0
            fl1 = fr1
        dn[n - 1] = density[n - 1] - k_over_h * (fw0 - fl0)
        mn[n - 1] = momentum[n - 1] - k_over_h * (fw1 - fl1)
    return density_new, momentum_new


def direct_max_speed(const double[::1] density, const double[::1] momentum,
                     double mach, double gamma):
    cdef Py_ssize_t n = density.shape[0]
    pressures = np.empty(n, dtype=np.float64)
    cdef double[::1] p = pressures
    cdef Py_ssize_t i, j
    cdef double rl, rr, ul, ur, sl, sr, u_hat, s
    cdef double best = 0.0
    with nogil:
        _cell_pressures(density, gamma, p)
        for i in range(n):
            j = n - 1 if i == 0 else i - 1
            rl = density[j]
            rr = density[i]
            ul = momentum[j] / rl
            ur = momentum[i] / rr
            sl = sqrt(rl)
            sr = sqrt(rr)
            u_hat = (ur * sr + ul * sl) / (sr + sl)
            s = fabs(u_hat) + sqrt(_p_slope(rl, rr, p[j], p[i], gamma)) / mach
            if s > best:
                best = s
    return best
