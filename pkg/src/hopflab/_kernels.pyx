# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled batched kernels; hopflab._kernels_py mirrors this surface."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"


cdef inline void _qmul(const double* a, const double* b, double* o) noexcept nogil:
    o[0] = a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
    o[1] = a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2]
    o[2] = a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1]
    o[3] = a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]


cdef inline void _qconj(const double* a, double* o) noexcept nogil:
    o[0] = a[0]
    o[1] = -a[1]
    o[2] = -a[2]
    o[3] = -a[3]


def quat_conj_2d(const double[:, ::1] a):
    cdef Py_ssize_t n = a.shape[0], i
    out_arr = np.empty((n, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    for i in range(n):
        _qconj(&a[i, 0], &out[i, 0])
    return out_arr


def quat_mul_2d(const double[:, ::1] a, const double[:, ::1] b):
    """Hamilton product of stacked quaternions, (n, 4) x (n, 4) -> (n, 4)."""
    cdef Py_ssize_t n = a.shape[0], i
    if b.shape[0] != n:
        raise ValueError("stacked quaternion arrays must share length")
    out_arr = np.empty((n, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    with nogil:
        for i in range(n):
            _qmul(&a[i, 0], &b[i, 0], &out[i, 0])
    return out_arr


def oct_mul_2d(const double[:, ::1] a, const double[:, ::1] b):
    """Cayley-Dickson product of stacked octonions, (n, 8) x (n, 8) -> (n, 8).

    Octonions are quaternion pairs (p, q) with product
    (p, q)(r, s) = (p r - conj(s) q, s p + q conj(r)).
    """
    cdef Py_ssize_t n = a.shape[0], i, k
    if b.shape[0] != n:
        raise ValueError("stacked octonion arrays must share length")
    out_arr = np.empty((n, 8), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double cs[4]
    cdef double cr[4]
    cdef double t1[4]
    cdef double t2[4]
    with nogil:
        for i in range(n):
            _qconj(&b[i, 4], cs)
            _qconj(&b[i, 0], cr)
            _qmul(&a[i, 0], &b[i, 0], t1)
            _qmul(cs, &a[i, 4], t2)
            for k in range(4):
                out[i, k] = t1[k] - t2[k]
            _qmul(&b[i, 4], &a[i, 0], t1)
            _qmul(&a[i, 4], cr, t2)
            for k in range(4):
                out[i, 4 + k] = t1[k] + t2[k]
    return out_arr


def rot4_apply_2d(const double[::1] l, const double[::1] r, const double[:, ::1] v):
    """Apply v -> l * v * conj(r) to stacked 4-vectors, (n, 4) -> (n, 4)."""
    cdef Py_ssize_t n = v.shape[0], i
    out_arr = np.empty((n, 4), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double rc[4]
    cdef double lv[4]
    _qconj(&r[0], rc)
    with nogil:
        for i in range(n):
            _qmul(&l[0], &v[i, 0], lv)
            _qmul(lv, rc, &out[i, 0])
    return out_arr


def row_max_dot_2d(const double[:, ::1] a, const double[:, ::1] b):
    """Per-row maximum of the dot-product matrix a @ b.T, (m, d), (n, d) -> (m,)."""
    cdef Py_ssize_t m = a.shape[0], n = b.shape[0], d = a.shape[1]
    cdef Py_ssize_t i, j, k
    if b.shape[1] != d:
        raise ValueError("point sets must share ambient dimension")
    out_arr = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double best, acc
    with nogil:
        for i in range(m):
            best = -1e300
            for j in range(n):
                acc = 0.0
                for k in range(d):
                    acc += a[i, k] * b[j, k]
                if acc > best:
                    best = acc
            out[i] = best
    return out_arr
