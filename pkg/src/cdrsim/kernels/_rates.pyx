# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled per-draw rate evaluation for all five schemes."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log2

cnp.import_array()


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


def scheme_rates(const double complex[::1] h1, const double complex[::1] h2,
                 const double complex[::1] h3, const double complex[::1] h4,
                 const double complex[::1] h5, double n):
    cdef Py_ssize_t size = h1.shape[0]
    if not (h2.shape[0] == size and h3.shape[0] == size
            and h4.shape[0] == size and h5.shape[0] == size):
        raise ValueError("gain arrays must have equal length")
    if not n > 0:
        raise ValueError("noise power must be positive")
    out_arr = np.empty((5, 2, size), dtype=np.float64)
    cdef double[:, :, ::1] out = out_arr
    cdef double inv_n = 1.0 / n
    cdef double g1, g2, g3, g4, g5, gr, gb2, s, t
    cdef double complex det
    cdef Py_ssize_t i
    with nogil:
        for i in range(size):
            g1 = _abs2(h1[i]) * inv_n
            g2 = _abs2(h2[i]) * inv_n
            g3 = _abs2(h3[i]) * inv_n
            g4 = _abs2(h4[i]) * inv_n
            g5 = _abs2(h5[i]) * inv_n
            gr = g1 * g2 / (g1 + g2 + 1.0)
            # reference
            out[0, 0, i] = 0.5 * log2(1.0 + gr)
            out[0, 1, i] = log2(1.0 + g3)
            # S1
            out[1, 0, i] = log2(1.0 + g1 * g2 / (g1 + g2 + g4 + g1 * g4 + 1.0))
            out[1, 1, i] = log2(1.0 + g3 * (g1 + 1.0) / (2.0 * g1 + 1.0))
            # S2
            det = h2[i] * h3[i] - h1[i] * h4[i]
            gb2 = _abs2(det) * inv_n * inv_n
            s = g1 + g2 + g5 + 1.0
            out[2, 0, i] = log2(1.0 + g1 * g2 / (2.0 * g1 + g2 + 1.0))
            out[2, 1, i] = log2(1.0 + (g3 * s + g5 * (g1 + gb2)) / ((g4 + 1.0) * s + g2 * g5))
            # S3
            t = g3 + 1.0
            out[3, 0, i] = log2(1.0 + gr)
            out[3, 1, i] = log2(1.0 + g3 * t * (g1 + 1.0) / ((g1 + g5 + 1.0) * t + g1 * g5))
            # S4
            out[4, 0, i] = log2(1.0 + g1 * g2 * t / (g1 * g5 + s * t))
            out[4, 1, i] = log2(1.0 + g3 + g1 * g5 / (s + g1 * g2))
    return out_arr
