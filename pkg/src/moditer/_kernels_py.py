"""Pure-Python (numpy) implementations of the hot numerical kernels.

These mirror the compiled versions in ``_kernels.pyx`` bit for bit.  Complex
arithmetic is spelled out on separated real/imaginary planes: numpy's fused
SIMD loops for complex arrays round differently from the plain C sequence
(they contract multiply-add into FMA), so relying on complex dtype ufuncs
would break the byte-stable-report guarantee whenever the backends are
swapped.  Separate real multiplies, subtracts and adds each round once,
exactly like the extension built with -ffp-contract=off.

Results agree with the compiled backend bitwise for finite inputs; the
C99 Annex G infinity fixup is not reproduced.
"""

from __future__ import annotations

import numpy as np


def horner_many(coeffs, ws):
    """Evaluate sum_{n>=0} coeffs[n] * ws**n at many points at once.

    coeffs : 1-d complex array, ascending powers
    ws     : 1-d complex array of evaluation points
    Returns a complex array of the same shape as ws.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    ws = np.ascontiguousarray(ws, dtype=np.complex128)
    wr, wi = ws.real.copy(), ws.imag.copy()
    ar = np.zeros_like(wr)
    ai = np.zeros_like(wi)
    for c in coeffs[::-1]:
        # acc = acc*w + c, naive complex product, one rounding per op
        tr = ar * wr - ai * wi
        ti = ar * wi + ai * wr
        ar = tr + c.real
        ai = ti + c.imag
    out = np.empty(len(ws), dtype=np.complex128)
    out.real = ar
    out.imag = ai
    return out


def conv_complex(a, b):
    """Full linear convolution of two 1-d complex arrays.

    Direct summation keeps the result deterministic across lengths (no FFT
    cutover).  The branch on which factor drives the outer loop matches the
    compiled version so both accumulate in the same order.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    n, m = len(a), len(b)
    if n < m:
        a, b = b, a
        n, m = m, n
    ar, ai = a.real.copy(), a.imag.copy()
    out_r = np.zeros(n + m - 1)
    out_i = np.zeros(n + m - 1)
    for j in range(m):
        sr, si = b[j].real, b[j].imag
        tr = sr * ar - si * ai
        ti = sr * ai + si * ar
        out_r[j : j + n] += tr
        out_i[j : j + n] += ti
    out = np.empty(n + m - 1, dtype=np.complex128)
    out.real = out_r
    out.imag = out_i
    return out
