# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shrinkage kernels over contiguous row groups.

Every function here has a twin in ``_fallback`` with identical semantics;
``bsecg._core`` picks one at import time.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt

cnp.import_array()


def soft_threshold(const double[:, ::1] v, double tau):
    cdef Py_ssize_t i, j, n = v.shape[0], s = v.shape[1]
    cdef double a, x
    out = np.empty((n, s), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for i in range(n):
            for j in range(s):
                x = v[i, j]
                a = fabs(x) - tau
                if a <= 0.0:
                    o[i, j] = 0.0
                elif x > 0.0:
                    o[i, j] = a
                else:
                    o[i, j] = -a
    return out


def hierarchical_prox(const double[:, ::1] v, const Py_ssize_t[::1] bounds,
                      double tau1, double tau2):
    """Soft-threshold every entry by tau1, then shrink each row group by tau2.

    ``bounds`` holds G+1 increasing row offsets; group g spans rows
    bounds[g]:bounds[g+1].
    """
    cdef Py_ssize_t g, i, j, lo, hi
    cdef Py_ssize_t ng = bounds.shape[0] - 1, s = v.shape[1]
    cdef double a, x, nrm, scale
    out = np.empty((v.shape[0], s), dtype=np.float64)
    cdef double[:, ::1] o = out
    with nogil:
        for g in range(ng):
            lo = bounds[g]
            hi = bounds[g + 1]
            nrm = 0.0
            for i in range(lo, hi):
                for j in range(s):
                    x = v[i, j]
                    a = fabs(x) - tau1
                    if a <= 0.0:
                        a = 0.0
                    elif x < 0.0:
                        a = -a
                    o[i, j] = a
                    nrm += a * a
            nrm = sqrt(nrm)
            if nrm <= tau2:
                scale = 0.0
            else:
                scale = 1.0 - tau2 / nrm
            for i in range(lo, hi):
                for j in range(s):
                    o[i, j] = o[i, j] * scale
    return out


def hierarchical_penalty(const double[:, ::1] x, const Py_ssize_t[::1] bounds,
                         double w1, double w2):
    """w1 * sum|x| + w2 * sum_g ||x[g]||_F in a single pass."""
    cdef Py_ssize_t g, i, j, lo, hi
    cdef Py_ssize_t ng = bounds.shape[0] - 1, s = x.shape[1]
    cdef double l1 = 0.0, grp = 0.0, nrm, a
    with nogil:
        for g in range(ng):
            lo = bounds[g]
            hi = bounds[g + 1]
            nrm = 0.0
            for i in range(lo, hi):
                for j in range(s):
                    a = x[i, j]
                    l1 += fabs(a)
                    nrm += a * a
            grp += sqrt(nrm)
    return w1 * l1 + w2 * grp


def group_norms(const double[:, ::1] x, const Py_ssize_t[::1] bounds):
    cdef Py_ssize_t g, i, j, lo, hi
    cdef Py_ssize_t ng = bounds.shape[0] - 1, s = x.shape[1]
    cdef double nrm
    out = np.empty(ng, dtype=np.float64)
    cdef double[::1] o = out
    with nogil:
        for g in range(ng):
            lo = bounds[g]
            hi = bounds[g + 1]
            nrm = 0.0
            for i in range(lo, hi):
                for j in range(s):
                    nrm += x[i, j] * x[i, j]
            o[g] = sqrt(nrm)
    return out
