# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the residual and power kernels.

Every function takes C-contiguous complex128 arrays; ``coreep.kernels``
handles the conversion.  Semantics match ``_kernels_py`` exactly.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, frexp, ldexp

cnp.import_array()

ctypedef double complex cplx


cdef inline double _abs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


def frob(const cplx[:, ::1] a):
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    with nogil:
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                s += _abs2(a[i, j])
    return sqrt(s)


def frob_diff(const cplx[:, ::1] a, const cplx[:, ::1] b):
    cdef Py_ssize_t i, j
    cdef double s = 0.0
    if a.shape[0] != b.shape[0] or a.shape[1] != b.shape[1]:
        raise ValueError("shape mismatch")
    with nogil:
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                s += _abs2(a[i, j] - b[i, j])
    return sqrt(s)


def frob_prod_diff(const cplx[:, ::1] a, const cplx[:, ::1] b, const cplx[:, ::1] c):
    """||a @ b - c||_F without materialising the product."""
    cdef Py_ssize_t i, j, l
    cdef Py_ssize_t m = a.shape[0], inner = a.shape[1], n = b.shape[1]
    cdef double s = 0.0
    cdef cplx acc
    if b.shape[0] != inner or c.shape[0] != m or c.shape[1] != n:
        raise ValueError("shape mismatch")
    with nogil:
        for i in range(m):
            for j in range(n):
                acc = -c[i, j]
                for l in range(inner):
                    acc = acc + a[i, l] * b[l, j]
                s += _abs2(acc)
    return sqrt(s)


cdef void _matmul(const cplx[:, ::1] a, cplx[:, ::1] b, cplx[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t i, j, l, n = a.shape[0]
    cdef cplx acc
    for i in range(n):
        for j in range(n):
            acc = 0
            for l in range(n):
                acc = acc + a[i, l] * b[l, j]
            out[i, j] = acc


def scaled_power(const cplx[:, ::1] a, int p):
    """Return ``(m, e)`` with ``m * 2**e == a**p`` and ``||m||_F`` in [1/2, 2]."""
    cdef Py_ssize_t n = a.shape[0], i, j
    cdef int step, k, e = 0
    cdef double nrm, f
    if a.shape[1] != n:
        raise ValueError("square matrix required")
    cur_arr = np.eye(n, dtype=np.complex128)
    nxt_arr = np.empty((n, n), dtype=np.complex128)
    cdef cplx[:, ::1] cur = cur_arr
    cdef cplx[:, ::1] nxt = nxt_arr
    cdef cplx[:, ::1] tmp
    for step in range(p):
        with nogil:
            _matmul(a, cur, nxt)
            nrm = 0.0
            for i in range(n):
                for j in range(n):
                    nrm += _abs2(nxt[i, j])
            nrm = sqrt(nrm)
        if nrm == 0.0:
            return np.zeros((n, n), dtype=np.complex128), 0
        if nrm < 0.5 or nrm > 2.0:
            frexp(nrm, &k)
            f = ldexp(1.0, -k)
            with nogil:
                for i in range(n):
                    for j in range(n):
                        nxt[i, j] = nxt[i, j] * f
            e += k
        tmp = cur
        cur = nxt
        nxt = tmp
    return np.asarray(cur).copy(), e
