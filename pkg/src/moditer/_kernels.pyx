# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: batched Horner evaluation and exact linear convolution.

Semantics must stay bit-for-bit identical to _kernels_py (same operation
order), since reports are required to be byte-stable across backends.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def horner_many(cnp.ndarray[cnp.complex128_t, ndim=1] coeffs,
                cnp.ndarray[cnp.complex128_t, ndim=1] ws):
    """Evaluate sum_j coeffs[j] * w**j for every w in ws (ascending powers)."""
    cdef Py_ssize_t n = coeffs.shape[0]
    cdef Py_ssize_t m = ws.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(m, dtype=np.complex128)
    cdef Py_ssize_t i, j
    cdef double complex acc, w
    for i in range(m):
        w = ws[i]
        acc = 0
        for j in range(n - 1, -1, -1):
            acc = acc * w + coeffs[j]
        out[i] = acc
    return out


def conv_complex(cnp.ndarray[cnp.complex128_t, ndim=1] a,
                 cnp.ndarray[cnp.complex128_t, ndim=1] b):
    """Full linear convolution, direct summation (deterministic, no FFT).

    The branch on which factor drives the outer loop mirrors the pure
    backend so both accumulate in the same order.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = b.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(n + m - 1, dtype=np.complex128)
    cdef Py_ssize_t i, j
    cdef double complex s
    if n >= m:
        for j in range(m):
            s = b[j]
            for i in range(n):
                out[j + i] = out[j + i] + s * a[i]
        return out
    for i in range(n):
        s = a[i]
        for j in range(m):
            out[i + j] = out[i + j] + s * b[j]
    return out
