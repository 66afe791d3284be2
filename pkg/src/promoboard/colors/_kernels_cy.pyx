# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled color kernels; contracts mirror _kernels_np exactly."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cbrt, pow, sqrt

cnp.import_array()

BACKEND = "cython"

cdef double _D = 6.0 / 29.0


def hist_rgb5(pixels):
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] p = np.ascontiguousarray(pixels, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.zeros(32768, dtype=np.int64)
    cdef Py_ssize_t i, n = p.shape[0]
    cdef int idx
    for i in range(n):
        idx = ((p[i, 0] >> 3) << 10) | ((p[i, 1] >> 3) << 5) | (p[i, 2] >> 3)
        out[idx] += 1
    return out


cdef inline double _lin(double c):
    if c > 0.04045:
        return pow((c + 0.055) / 1.055, 2.4)
    return c / 12.92


cdef inline double _f(double t):
    if t > _D * _D * _D:
        return cbrt(t)
    return t / (3.0 * _D * _D) + 4.0 / 29.0


def srgb_to_lab(rgb):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] c = np.asarray(rgb, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((c.shape[0], 3), dtype=np.float64)
    cdef Py_ssize_t i, n = c.shape[0]
    cdef double r, g, b, x, y, z, fx, fy, fz
    for i in range(n):
        r = _lin(c[i, 0] / 255.0)
        g = _lin(c[i, 1] / 255.0)
        b = _lin(c[i, 2] / 255.0)
        x = (0.4124564 * r + 0.3575761 * g + 0.1804375 * b) / 0.95047
        y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b
        z = (0.0193339 * r + 0.1191920 * g + 0.9503041 * b) / 1.08883
        fx = _f(x)
        fy = _f(y)
        fz = _f(z)
        out[i, 0] = 116.0 * fy - 16.0
        out[i, 1] = 500.0 * (fx - fy)
        out[i, 2] = 200.0 * (fy - fz)
    return out


def delta_e_many(lab_ref, labs):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ref = np.asarray(lab_ref, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] ls = np.asarray(labs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(ls.shape[0], dtype=np.float64)
    cdef Py_ssize_t i, n = ls.shape[0]
    cdef double dl, da, db
    for i in range(n):
        dl = ls[i, 0] - ref[0]
        da = ls[i, 1] - ref[1]
        db = ls[i, 2] - ref[2]
        out[i] = sqrt(dl * dl + da * da + db * db)
    return out
