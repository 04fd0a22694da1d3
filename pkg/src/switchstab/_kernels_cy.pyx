# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the sampling and simulation hot loops.

Same contracts as switchstab._kernels_py; see that module for documentation.
"""

from libc.math cimport sqrt

import numpy as np


def sample_modes(const double[:, ::1] cum_rows, long r0, const double[::1] uniforms):
    cdef Py_ssize_t n = uniforms.shape[0]
    cdef Py_ssize_t M = cum_rows.shape[1]
    out = np.empty(n + 1, dtype=np.int64)
    cdef long[::1] path = out
    cdef Py_ssize_t k, j
    cdef long s
    cdef double u
    path[0] = r0
    for k in range(n):
        s = path[k]
        u = uniforms[k]
        j = 0
        # first j with cum_rows[s, j] > u, clamped to the last column
        while j < M - 1 and u >= cum_rows[s, j]:
            j += 1
        path[k + 1] = j
    return out


def sample_gaps(const double[::1] cum, const long[::1] taus, const double[::1] uniforms):
    cdef Py_ssize_t n = uniforms.shape[0]
    cdef Py_ssize_t S = cum.shape[0]
    out = np.empty(n, dtype=np.int64)
    cdef long[::1] gaps = out
    cdef Py_ssize_t k, j
    cdef double u
    for k in range(n):
        u = uniforms[k]
        j = 0
        while j < S - 1 and u >= cum[j]:
            j += 1
        gaps[k] = taus[j]
    return out


def fill_sigma(const long[::1] r, const long[::1] times, long horizon):
    out = np.empty(horizon + 1, dtype=np.int64)
    cdef long[::1] sigma = out
    cdef Py_ssize_t T = times.shape[0]
    cdef Py_ssize_t i
    cdef long start, end, k, mode
    for i in range(T):
        start = times[i]
        if start > horizon:
            break
        if i + 1 >= T:
            end = horizon + 1
        else:
            end = times[i + 1]
            if end > horizon + 1:
                end = horizon + 1
        mode = r[start]
        for k in range(start, end):
            sigma[k] = mode
    return out


def closed_loop(const double[:, :, :, ::1] F, const long[::1] r, const long[::1] sigma,
                const double[::1] x0, double clamp):
    cdef Py_ssize_t H = r.shape[0] - 1
    cdef Py_ssize_t n = x0.shape[0]
    Xout = np.empty((H + 1, n), dtype=np.float64)
    cdef double[:, ::1] X = Xout
    work = np.empty(n, dtype=np.float64)
    cdef double[::1] x = work
    cdef double[::1] xn
    cdef Py_ssize_t k, a, b
    cdef long i, j
    cdef double acc, s, scale
    cdef long nonfinite = -1
    xnew = np.empty(n, dtype=np.float64)
    xn = xnew
    for a in range(n):
        x[a] = x0[a]
        X[0, a] = x0[a]
    for k in range(H):
        i = r[k]
        j = sigma[k]
        for a in range(n):
            acc = 0.0
            for b in range(n):
                acc += F[i, j, a, b] * x[b]
            xn[a] = acc
        s = 0.0
        for a in range(n):
            s += xn[a] * xn[a]
        s = sqrt(s)
        if s > clamp:
            scale = clamp / s
            for a in range(n):
                xn[a] *= scale
            if nonfinite < 0:
                nonfinite = k + 1
        for a in range(n):
            x[a] = xn[a]
            X[k + 1, a] = xn[a]
    return Xout, int(nonfinite)
