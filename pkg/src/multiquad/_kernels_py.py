"""Pure numpy implementation of the sieve kernels (fallback for ``_kernels``)."""

import numpy as np


def sieve_segment(lo, hi, primes):
    """Profile arrays for n in [lo, hi).

    ``primes`` must contain every prime p with p*p < hi, ascending.
    Returns (spf, radical, omega1, omega3, squarefree).
    """
    lo, hi = int(lo), int(hi)
    n = hi - lo
    spf = np.zeros(n, dtype=np.int64)
    rad = np.ones(n, dtype=np.int64)
    rem = np.arange(lo, hi, dtype=np.int64)
    om1 = np.zeros(n, dtype=np.int8)
    om3 = np.zeros(n, dtype=np.int8)
    sqf = np.ones(n, dtype=bool)
    for p in primes:
        p = int(p)
        if p * p >= hi:
            break
        start = (-lo) % p
        if start >= n:
            continue
        view = spf[start::p]
        view[view == 0] = p
        rad[start::p] *= p
        rem[start::p] //= p
        pk = p * p
        first = True
        while pk < hi:
            s = (-lo) % pk
            if s < n:
                if first:
                    sqf[s::pk] = False
                rem[s::pk] //= p
            first = False
            pk *= p
        if p % 4 == 1:
            om1[start::p] += 1
        elif p % 4 == 3:
            om3[start::p] += 1
    big = rem > 1
    unset = big & (spf == 0)
    spf[unset] = rem[unset]
    rad[big] *= rem[big]
    r4 = rem % 4
    om1[big & (r4 == 1)] += 1
    om3[big & (r4 == 3)] += 1
    spf[spf == 0] = 1
    return spf, rad, om1, om3, sqf


def odd_squarefree_histogram(lo, hi, primes, width=16):
    """hist[a, b] = #{odd squarefree n in [lo, hi) : omega1(n) = a, omega3(n) = b}."""
    lo, hi = int(lo), int(hi)
    n0 = lo if lo % 2 == 1 else lo + 1
    if n0 >= hi:
        return np.zeros((width, width), dtype=np.int64)
    cnt = (hi - n0 + 1) // 2
    rem = np.arange(n0, hi, 2, dtype=np.int64)
    om1 = np.zeros(cnt, dtype=np.int8)
    om3 = np.zeros(cnt, dtype=np.int8)
    sqf = np.ones(cnt, dtype=bool)
    for p in primes:
        p = int(p)
        if p == 2:
            continue
        if p * p >= hi:
            break
        m = -(-n0 // p) * p
        if m % 2 == 0:
            m += p
        s = (m - n0) // 2
        if s < cnt:
            rem[s::p] //= p
            if p % 4 == 1:
                om1[s::p] += 1
            else:
                om3[s::p] += 1
        pp = p * p
        m = -(-n0 // pp) * pp
        if m % 2 == 0:
            m += pp
        s = (m - n0) // 2
        if s < cnt:
            sqf[s::pp] = False
    big = rem > 1
    r4 = rem % 4
    om1[big & (r4 == 1)] += 1
    om3[big & (r4 == 3)] += 1
    idx = om1[sqf].astype(np.int64) * width + om3[sqf]
    return np.bincount(idx, minlength=width * width).reshape(width, width).astype(np.int64)
