# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot inner loops.

Three loops dominate runtime in this package: batch evaluation of the
three-dimensional Zorich-type map (radial-law, branch and backward-orbit
suites), the chaos-game orbit (a sequential recurrence, so it cannot be
vectorized), and the Gauss linking-number product quadrature (O(N^2) per
pair of curves).  ``uqrlab._purepy`` holds numpy equivalents with the same
signatures; ``uqrlab._backend`` picks one set at import time.
"""

from libc.math cimport acos, cos, exp, fabs, floor, log, sin, sqrt

import numpy as np

cdef double HALF_PI = 1.5707963267948966


cdef inline void _fold(double x, double *u, int *parity) noexcept nogil:
    # Reflect x into [0, 1] across integer planes; parity counts the folds mod 2.
    cdef double q = floor(x)
    cdef double r = x - q
    cdef long qi = <long> q
    if qi % 2 != 0:
        u[0] = 1.0 - r
        parity[0] = 1
    else:
        u[0] = r
        parity[0] = 0


def zorich_eval3(double[:, ::1] pts):
    """Evaluate the Zorich-type map on an (n, 3) batch, returning (n, 3)."""
    cdef Py_ssize_t n = pts.shape[0]
    cdef Py_ssize_t i
    out_arr = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double u, v, up, vp, s, nrm, c, w1, w2, w3, scale
    cdef int p1, p2
    with nogil:
        for i in range(n):
            _fold(pts[i, 0], &u, &p1)
            _fold(pts[i, 1], &v, &p2)
            up = 2.0 * u - 1.0
            vp = 2.0 * v - 1.0
            s = fabs(up)
            if fabs(vp) > s:
                s = fabs(vp)
            if s == 0.0:
                w1 = 0.0
                w2 = 0.0
                w3 = 1.0
            else:
                nrm = sqrt(up * up + vp * vp)
                c = sin(HALF_PI * s) / nrm
                w1 = c * up
                w2 = c * vp
                w3 = cos(HALF_PI * s)
            if (p1 + p2) % 2 != 0:
                w3 = -w3
            scale = exp(pts[i, 2])
            out[i, 0] = scale * w1
            out[i, 1] = scale * w2
            out[i, 2] = scale * w3
    return out_arr


def chaos_affine(double[:, :, ::1] mats, double[:, ::1] shifts,
                 int[::1] idx, double[::1] x0, Py_ssize_t burnin):
    """Run the chaos-game recurrence x <- A[k] x + b[k] along idx.

    Returns the (len(idx) - burnin, dim) trajectory after the burn-in.
    """
    cdef Py_ssize_t steps = idx.shape[0]
    cdef Py_ssize_t dim = x0.shape[0]
    cdef Py_ssize_t n_out = steps - burnin
    if n_out < 0:
        n_out = 0
    out_arr = np.empty((n_out, dim), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] x = np.array(x0, dtype=np.float64)
    cdef double[::1] y = np.empty(dim, dtype=np.float64)
    cdef Py_ssize_t t, a, b
    cdef int k
    cdef double acc
    with nogil:
        for t in range(steps):
            k = idx[t]
            for a in range(dim):
                acc = shifts[k, a]
                for b in range(dim):
                    acc += mats[k, a, b] * x[b]
                y[a] = acc
            for a in range(dim):
                x[a] = y[a]
            if t >= burnin:
                for a in range(dim):
                    out[t - burnin, a] = x[a]
    return out_arr


def gauss_linking_sum(double[:, ::1] p1, double[:, ::1] v1,
                      double[:, ::1] p2, double[:, ::1] v2):
    """Raw double sum of det(v1_i, v2_j, p1_i - p2_j) / |p1_i - p2_j|^3.

    The caller scales by 1 / (4 pi n1 n2) with velocities taken per unit
    parameter to obtain the Gauss linking integral.
    """
    cdef Py_ssize_t n1 = p1.shape[0]
    cdef Py_ssize_t n2 = p2.shape[0]
    cdef Py_ssize_t i, j
    cdef double rx, ry, rz, cxx, cxy, cxz, r3, total
    total = 0.0
    with nogil:
        for i in range(n1):
            for j in range(n2):
                rx = p1[i, 0] - p2[j, 0]
                ry = p1[i, 1] - p2[j, 1]
                rz = p1[i, 2] - p2[j, 2]
                cxx = v1[i, 1] * v2[j, 2] - v1[i, 2] * v2[j, 1]
                cxy = v1[i, 2] * v2[j, 0] - v1[i, 0] * v2[j, 2]
                cxz = v1[i, 0] * v2[j, 1] - v1[i, 1] * v2[j, 0]
                r3 = sqrt(rx * rx + ry * ry + rz * rz)
                r3 = r3 * r3 * r3
                total += (cxx * rx + cxy * ry + cxz * rz) / r3
    return total
