# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled search primitives over sorted int64 index columns.

Same contracts as cvkg._kernel.pyindex; this version avoids per-call numpy
overhead with plain C binary searches, which matters inside join loops.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline Py_ssize_t _lower(const i64[::1] a, Py_ssize_t lo, Py_ssize_t hi, i64 key) nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline Py_ssize_t _upper(const i64[::1] a, Py_ssize_t lo, Py_ssize_t hi, i64 key) nogil:
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] <= key:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline (Py_ssize_t, Py_ssize_t) _narrow(
    const i64[::1] c0, const i64[::1] c1, const i64[::1] c2,
    i64 k0, i64 k1, i64 k2, int nbound,
) nogil:
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = c0.shape[0]
    cdef Py_ssize_t nlo
    if nbound >= 1:
        nlo = _lower(c0, lo, hi, k0)
        hi = _upper(c0, nlo, hi, k0)
        lo = nlo
        if lo >= hi:
            return lo, lo
    if nbound >= 2:
        nlo = _lower(c1, lo, hi, k1)
        hi = _upper(c1, nlo, hi, k1)
        lo = nlo
        if lo >= hi:
            return lo, lo
    if nbound >= 3:
        nlo = _lower(c2, lo, hi, k2)
        hi = _upper(c2, nlo, hi, k2)
        lo = nlo
    return lo, hi


def narrow_range(const i64[::1] c0, const i64[::1] c1, const i64[::1] c2,
                 i64 k0, i64 k1, i64 k2, int nbound):
    """Half-open row range whose first `nbound` columns equal (k0, k1, k2)."""
    cdef Py_ssize_t lo, hi
    with nogil:
        lo, hi = _narrow(c0, c1, c2, k0, k1, k2, nbound)
    return lo, hi


def find_positions(const i64[::1] c0, const i64[::1] c1, const i64[::1] c2,
                   const i64[::1] q0, const i64[::1] q1, const i64[::1] q2):
    """Row index of each query triple in the sorted columns, -1 when absent."""
    cdef Py_ssize_t n = q0.shape[0]
    out_arr = np.empty(n, dtype=np.int64)
    cdef i64[::1] out = out_arr
    cdef Py_ssize_t i, lo, hi
    with nogil:
        for i in range(n):
            lo, hi = _narrow(c0, c1, c2, q0[i], q1[i], q2[i], 3)
            out[i] = lo if lo < hi else -1
    return out_arr
