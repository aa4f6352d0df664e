# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sieve kernels. Mirrors ``_kernels_py`` exactly."""

import numpy as np

from libc.stdint cimport int64_t, int8_t, uint8_t


def sieve_segment(int64_t lo, int64_t hi, const int64_t[::1] primes):
    """Profile arrays for n in [lo, hi).

    ``primes`` must contain every prime p with p*p < hi, ascending.
    Returns (spf, radical, omega1, omega3, squarefree).
    """
    cdef Py_ssize_t n = hi - lo
    spf = np.zeros(n, dtype=np.int64)
    rad = np.ones(n, dtype=np.int64)
    rem_arr = np.arange(lo, hi, dtype=np.int64)
    om1 = np.zeros(n, dtype=np.int8)
    om3 = np.zeros(n, dtype=np.int8)
    sqf = np.ones(n, dtype=np.uint8)
    cdef int64_t[::1] s = spf
    cdef int64_t[::1] r = rad
    cdef int64_t[::1] rem = rem_arr
    cdef int8_t[::1] o1 = om1
    cdef int8_t[::1] o3 = om3
    cdef uint8_t[::1] q = sqf
    cdef Py_ssize_t i, j, np_ = primes.shape[0]
    cdef int64_t p, m, v
    with nogil:
        for j in range(np_):
            p = primes[j]
            if p * p >= hi:
                break
            m = ((lo + p - 1) // p) * p
            while m < hi:
                i = m - lo
                if s[i] == 0:
                    s[i] = p
                r[i] *= p
                v = rem[i] // p
                if v % p == 0:
                    q[i] = 0
                    while v % p == 0:
                        v = v // p
                rem[i] = v
                if p % 4 == 1:
                    o1[i] += 1
                elif p % 4 == 3:
                    o3[i] += 1
                m += p
        for i in range(n):
            v = rem[i]
            if v > 1:
                if s[i] == 0:
                    s[i] = v
                r[i] *= v
                if v % 4 == 1:
                    o1[i] += 1
                elif v % 4 == 3:
                    o3[i] += 1
            elif s[i] == 0:
                s[i] = 1
    return spf, rad, om1, om3, sqf.view(np.bool_)


def odd_squarefree_histogram(int64_t lo, int64_t hi, const int64_t[::1] primes, int width=16):
    """hist[a, b] = #{odd squarefree n in [lo, hi) : omega1(n) = a, omega3(n) = b}."""
    hist = np.zeros((width, width), dtype=np.int64)
    cdef int64_t n0 = lo if lo % 2 == 1 else lo + 1
    if n0 >= hi:
        return hist
    cdef Py_ssize_t cnt = (hi - n0 + 1) // 2
    rem_arr = np.arange(n0, hi, 2, dtype=np.int64)
    om1 = np.zeros(cnt, dtype=np.int8)
    om3 = np.zeros(cnt, dtype=np.int8)
    sqf = np.ones(cnt, dtype=np.uint8)
    cdef int64_t[::1] rem = rem_arr
    cdef int8_t[::1] o1 = om1
    cdef int8_t[::1] o3 = om3
    cdef uint8_t[::1] q = sqf
    cdef int64_t[:, ::1] h = hist
    cdef Py_ssize_t i, j, np_ = primes.shape[0]
    cdef int64_t p, m, pp, v
    with nogil:
        for j in range(np_):
            p = primes[j]
            if p == 2:
                continue
            if p * p >= hi:
                break
            m = ((n0 + p - 1) // p) * p
            if m % 2 == 0:
                m += p
            i = (m - n0) // 2
            while i < cnt:
                rem[i] = rem[i] // p
                if p % 4 == 1:
                    o1[i] += 1
                else:
                    o3[i] += 1
                i += p
            pp = p * p
            m = ((n0 + pp - 1) // pp) * pp
            if m % 2 == 0:
                m += pp
            i = (m - n0) // 2
            while i < cnt:
                q[i] = 0
                i += pp
        for i in range(cnt):
            if q[i] == 0:
                continue
            v = rem[i]
            if v > 1:
                if v % 4 == 1:
                    o1[i] += 1
                else:
                    o3[i] += 1
            h[o1[i], o3[i]] += 1
    return hist
