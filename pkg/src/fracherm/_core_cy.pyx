# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``_core_py``: fused loops for the hot kernel evaluations."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atanh, exp, expm1, fabs, pow, tanh

cnp.import_array()

cdef double FOUR_PI = 12.566370614359172


def hermite_heat(double[::1] s, double[::1] qm, double[::1] qp, double d, double m):
    cdef Py_ssize_t i, n = s.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double tau, omt
    for i in range(n):
        tau = tanh(s[i])
        omt = 2.0 / (expm1(2.0 * s[i]) + 2.0)
        o[i] = (
            pow(omt, 0.5 * (m + d))
            * pow(1.0 + tau, -0.5 * (m - d))
            * exp(-0.25 * (qm[i] / tau + tau * qp[i]))
            / pow(FOUR_PI * tau, 0.5 * d)
        )
    return out


def hermite_heat_tanh(double[::1] u, double[::1] qm, double[::1] qp, double d, double m):
    cdef Py_ssize_t i, n = u.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = (
            pow(1.0 - u[i], 0.5 * (m + d))
            * pow(1.0 + u[i], -0.5 * (m - d))
            * exp(-0.25 * (qm[i] / u[i] + u[i] * qp[i]))
            / pow(FOUR_PI * u[i], 0.5 * d)
        )
    return out


def gauss_heat(double[::1] s, double[::1] q, double d, double R):
    cdef Py_ssize_t i, n = s.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(n):
        o[i] = exp(-s[i] * R - 0.25 * q[i] / s[i]) / pow(FOUR_PI * s[i], 0.5 * d)
    return out


def kernel_time_integrand(double[::1] u, double[::1] qm, double[::1] qp,
                          double d, double m, double sigma):
    cdef Py_ssize_t i, n = u.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double t
    for i in range(n):
        t = atanh(u[i])
        o[i] = (
            pow(1.0 - u[i], 0.5 * (m + d) - 1.0)
            * pow(1.0 + u[i], -0.5 * (m - d) - 1.0)
            * exp(-0.25 * (qm[i] / u[i] + u[i] * qp[i]))
            / pow(FOUR_PI * u[i], 0.5 * d)
            / pow(t, 1.0 + sigma)
        )
    return out


def kernel_diff_time_integrand(double[::1] u, double[::1] qy, double[::1] qpp,
                               double[::1] qpm, double d, double m, double sigma):
    cdef Py_ssize_t i, n = u.shape[0]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] o = out
    cdef double t, pre
    for i in range(n):
        t = atanh(u[i])
        pre = (
            pow(1.0 - u[i], 0.5 * (m + d) - 1.0)
            * pow(1.0 + u[i], -0.5 * (m - d) - 1.0)
            * exp(-0.25 * qy[i] / u[i])
            / pow(FOUR_PI * u[i], 0.5 * d)
            / pow(t, 1.0 + sigma)
        )
        o[i] = pre * fabs(exp(-0.25 * u[i] * qpp[i]) - exp(-0.25 * u[i] * qpm[i]))
    return out
