# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo kernels; mirrors ``_pykernels`` bit for bit."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint8_t, uint64_t

cnp.import_array()

BACKEND = "cython"

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t TRIAL_GAMMA = 0xD1B54A32D192ED03ULL


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def message_bits(uint64_t key, Py_ssize_t trial_start, Py_ssize_t trials,
                 Py_ssize_t n, uint64_t threshold):
    cdef cnp.ndarray[uint8_t, ndim=2] out = np.empty((trials, n), dtype=np.uint8)
    cdef uint8_t[:, ::1] o = out
    cdef Py_ssize_t t, j
    cdef uint64_t tk
    with nogil:
        for t in range(trials):
            tk = _mix(key + <uint64_t>(trial_start + t + 1) * TRIAL_GAMMA)
            for j in range(n):
                o[t, j] = (_mix(tk + <uint64_t>(j + 1) * GAMMA) >> 11) < threshold
    return out


def encode_float(uint64_t key, Py_ssize_t trial_start, Py_ssize_t trials,
                 Py_ssize_t n, uint64_t threshold, double q):
    cdef cnp.ndarray[double, ndim=1] xs = np.empty(trials)
    cdef cnp.ndarray[double, ndim=1] ys = np.empty(trials)
    cdef double[::1] xv = xs
    cdef double[::1] yv = ys
    cdef Py_ssize_t t, j
    cdef uint64_t tk
    cdef double x, y, s, d
    with nogil:
        for t in range(trials):
            tk = _mix(key + <uint64_t>(trial_start + t + 1) * TRIAL_GAMMA)
            x = 0.0
            y = 1.0
            for j in range(n):
                d = y - x
                d = q * d
                s = x + d
                if (_mix(tk + <uint64_t>(j + 1) * GAMMA) >> 11) < threshold:
                    x = s
                else:
                    y = s
            xv[t] = x
            yv[t] = y
    return xs, ys
