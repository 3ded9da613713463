# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the kernels in ``_pykernels``; same signatures."""
import numpy as np
from libc.math cimport sqrt, INFINITY


def slope_sup(const double[:, ::1] Y, const double[:, ::1] Ys,
              const double[::1] x, const double[::1] xs, double min_dist):
    cdef Py_ssize_t N = Y.shape[0], n = Y.shape[1], i, k
    cdef double best = -INFINITY, num, nrm, d
    cdef Py_ssize_t arg = -1
    for i in range(N):
        num = 0.0
        nrm = 0.0
        for k in range(n):
            d = Y[i, k] - x[k]
            nrm += d * d
            num += (xs[k] - Ys[i, k]) * d
        nrm = sqrt(nrm)
        if nrm >= min_dist and num / nrm > best:
            best = num / nrm
            arg = i
    return best, arg


def related_min(const double[:, ::1] Y, const double[:, ::1] Ys,
                const double[::1] x, const double[::1] xs):
    cdef Py_ssize_t N = Y.shape[0], n = Y.shape[1], i, k
    cdef double best = INFINITY, v
    cdef Py_ssize_t arg = -1
    for i in range(N):
        v = 0.0
        for k in range(n):
            v += (Ys[i, k] - xs[k]) * (Y[i, k] - x[k])
        if v < best:
            best = v
            arg = i
    return best, arg


def enlargement_min(const double[:, ::1] Y, const double[:, ::1] Ys,
                    const double[::1] x, const double[::1] xs,
                    double eps, bint weighted):
    cdef Py_ssize_t N = Y.shape[0], n = Y.shape[1], i, k
    cdef double best = INFINITY, v, nrm, d
    cdef Py_ssize_t arg = -1
    for i in range(N):
        v = 0.0
        nrm = 0.0
        for k in range(n):
            d = x[k] - Y[i, k]
            nrm += d * d
            v += (xs[k] - Ys[i, k]) * d
        nrm = sqrt(nrm)
        if nrm < 1e-12:
            continue
        v += eps * (nrm if weighted else 1.0)
        if v < best:
            best = v
            arg = i
    return best, arg


def pairwise_min(const double[:, ::1] Y, const double[:, ::1] Ys):
    cdef Py_ssize_t N = Y.shape[0], n = Y.shape[1], i, j, k
    cdef double best = INFINITY, v
    cdef Py_ssize_t bi = -1, bj = -1
    for i in range(N):
        for j in range(i + 1, N):
            v = 0.0
            for k in range(n):
                v += (Ys[i, k] - Ys[j, k]) * (Y[i, k] - Y[j, k])
            if v < best:
                best = v
                bi = i
                bj = j
    return best, bi, bj


def dykstra_halfspaces(const double[:, ::1] A, const double[::1] b,
                       const double[::1] p, double tol, long max_sweeps):
    cdef Py_ssize_t m = A.shape[0], n = A.shape[1], k, t
    cdef long sweep
    cdef double slack, moved, feas, s
    w_arr = np.array(p, dtype=np.float64)
    old_arr = np.empty(n)
    v_arr = np.empty(n)
    corr_arr = np.zeros((m, n))
    sq_arr = np.einsum("ij,ij->i", np.asarray(A), np.asarray(A))
    cdef double[::1] w = w_arr, old = old_arr, v = v_arr, sq = sq_arr
    cdef double[:, ::1] corr = corr_arr
    for sweep in range(1, max_sweeps + 1):
        for t in range(n):
            old[t] = w[t]
        for k in range(m):
            if sq[k] == 0.0:
                continue
            slack = -b[k]
            for t in range(n):
                v[t] = w[t] + corr[k, t]
                slack += A[k, t] * v[t]
            s = slack / sq[k] if slack < 0.0 else 0.0
            for t in range(n):
                w[t] = v[t] - s * A[k, t]
                corr[k, t] = v[t] - w[t]
        moved = 0.0
        for t in range(n):
            if abs(w[t] - old[t]) > moved:
                moved = abs(w[t] - old[t])
        feas = 0.0
        for k in range(m):
            slack = b[k]
            for t in range(n):
                slack -= A[k, t] * w[t]
            if slack > feas:
                feas = slack
        if moved < tol and feas < tol:
            return w_arr, sweep, True
    return w_arr, max_sweeps, False
