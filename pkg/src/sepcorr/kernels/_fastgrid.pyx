# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled dephased-entropy kernels; contract documented in kernels/__init__.

Each scan row fills a 4*Nb buffer of dephasing probabilities (scaled by 4),
runs one vectorizable x*log2(x) pass over it, then walks the row with a
running k-th-best threshold so the insertion routine only runs on the rare
candidates. The walk is scalar and strictly in scan order, which is what
makes ties resolve exactly like a naive sequential scan. Buffers are 64-byte
aligned so the vectorized pass computes identical values on every run.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, log2
from libc.stdlib cimport free

cnp.import_array()

cdef extern from "stdlib.h":
    void* aligned_alloc(size_t alignment, size_t size) nogil

_MAXK = 16

cdef int MAXK_C = 16


cdef inline double _entropy4(double al, double be, double ga) noexcept nogil:
    cdef double q0 = 1.0 + al + be + ga
    cdef double q1 = 1.0 + al - be - ga
    cdef double q2 = 1.0 - al + be - ga
    cdef double q3 = 1.0 - al - be + ga
    cdef double acc = 0.0
    if q0 > 1e-300:
        acc += q0 * log2(q0)
    if q1 > 1e-300:
        acc += q1 * log2(q1)
    if q2 > 1e-300:
        acc += q2 * log2(q2)
    if q3 > 1e-300:
        acc += q3 * log2(q3)
    return 2.0 - 0.25 * acc


cdef inline void _kinsert(double v, long idx, double* kv, long* ki, int* kn, int k) noexcept nogil:
    cdef int n = kn[0]
    cdef int p
    if n == k:
        if v > kv[k - 1] or (v == kv[k - 1] and idx > ki[k - 1]):
            return
        n = k - 1
    p = n
    while p > 0 and (kv[p - 1] > v or (kv[p - 1] == v and ki[p - 1] > idx)):
        kv[p] = kv[p - 1]
        ki[p] = ki[p - 1]
        p -= 1
    kv[p] = v
    ki[p] = idx
    if kn[0] < k:
        kn[0] = kn[0] + 1


def point_entropy(avec, bvec, tmat, axis_a, axis_b):
    """Entropy (bits) of the state dephased along one axis pair."""
    cdef double[::1] a = np.ascontiguousarray(avec, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(bvec, dtype=np.float64)
    cdef double[:, ::1] t = np.ascontiguousarray(tmat, dtype=np.float64)
    cdef double[::1] na = np.ascontiguousarray(axis_a, dtype=np.float64)
    cdef double[::1] nb = np.ascontiguousarray(axis_b, dtype=np.float64)
    cdef double al = na[0] * a[0] + na[1] * a[1] + na[2] * a[2]
    cdef double be = nb[0] * b[0] + nb[1] * b[1] + nb[2] * b[2]
    cdef double m0 = na[0] * t[0, 0] + na[1] * t[1, 0] + na[2] * t[2, 0]
    cdef double m1 = na[0] * t[0, 1] + na[1] * t[1, 1] + na[2] * t[2, 1]
    cdef double m2 = na[0] * t[0, 2] + na[1] * t[1, 2] + na[2] * t[2, 2]
    cdef double ga = m0 * nb[0] + m1 * nb[1] + m2 * nb[2]
    return _entropy4(al, be, ga)


def grid_scan(avec, bvec, tmat, axes_a, axes_b, k):
    """k smallest (entropy, flat index) pairs over the axis-pair product grid."""
    axes_a = np.ascontiguousarray(axes_a, dtype=np.float64)
    axes_b = np.ascontiguousarray(axes_b, dtype=np.float64)
    cdef Py_ssize_t na = axes_a.shape[0]
    cdef Py_ssize_t nb = axes_b.shape[0]
    cdef int kk = int(min(int(k), na * nb))
    if kk < 1:
        raise ValueError("k must be >= 1")
    if kk > _MAXK:
        raise ValueError(f"k must be <= {_MAXK}")

    cdef double[::1] alpha = np.ascontiguousarray(axes_a @ np.asarray(avec, dtype=np.float64))
    cdef double[::1] beta = np.ascontiguousarray(axes_b @ np.asarray(bvec, dtype=np.float64))
    cdef double[:, ::1] mrows = np.ascontiguousarray(axes_a @ np.asarray(tmat, dtype=np.float64))
    cdef double[:, ::1] axb = axes_b

    cdef double* buf = <double*> aligned_alloc(64, 4 * nb * sizeof(double))
    cdef double* kv = <double*> aligned_alloc(64, MAXK_C * sizeof(double))
    cdef long* ki = <long*> aligned_alloc(64, MAXK_C * sizeof(long))
    if buf == NULL or kv == NULL or ki == NULL:
        free(buf)
        free(kv)
        free(ki)
        raise MemoryError("grid_scan scratch allocation failed")

    cdef Py_ssize_t i, j, j4
    cdef int kcount = 0
    cdef double a0, m0, m1, m2, g, b0, q, h
    cdef double thresh = INFINITY

    with nogil:
        for i in range(na):
            a0 = alpha[i]
            m0 = mrows[i, 0]
            m1 = mrows[i, 1]
            m2 = mrows[i, 2]
            for j in range(nb):
                g = m0 * axb[j, 0] + m1 * axb[j, 1] + m2 * axb[j, 2]
                b0 = beta[j]
                buf[4 * j] = 1.0 + a0 + b0 + g
                buf[4 * j + 1] = 1.0 + a0 - b0 - g
                buf[4 * j + 2] = 1.0 - a0 + b0 - g
                buf[4 * j + 3] = 1.0 - a0 - b0 + g
            for j4 in range(4 * nb):
                q = buf[j4]
                buf[j4] = q * log2(q) if q > 1e-300 else 0.0
            for j in range(nb):
                h = 2.0 - 0.25 * (buf[4 * j] + buf[4 * j + 1] + buf[4 * j + 2] + buf[4 * j + 3])
                if h <= thresh:
                    _kinsert(h, i * nb + j, kv, ki, &kcount, kk)
                    thresh = kv[kk - 1] if kcount == kk else INFINITY

    out_v = np.empty(kcount, dtype=np.float64)
    out_i = np.empty(kcount, dtype=np.int64)
    for p in range(kcount):
        out_v[p] = kv[p]
        out_i[p] = ki[p]
    free(buf)
    free(kv)
    free(ki)
    return out_v, out_i
