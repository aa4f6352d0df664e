"""Segmented smallest-prime-factor sieve and squarefree profiles of integers."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import config, kernels
from .errors import (
    BoundExceededError,
    InvalidRangeError,
    OutOfRangeError,
    ZeroInputError,
)

# trial division is used for standalone integers (presentations, keys)
FACTOR_LIMIT = 10**14
HIST_WIDTH = 16


@dataclass(frozen=True)
class SquarefreeProfile:
    n: int
    is_squarefree: bool
    omega: int
    omega1: int
    omega3: int
    radical: int

    @property
    def is_odd(self) -> bool:
        return self.n % 2 == 1


@dataclass(frozen=True, eq=False)
class FactorSieve:
    """Multiplicative data for every n in ``[lo, hi)``.

    ``spf[n - lo]`` is the smallest prime factor of n (1 for n = 1).
    """

    lo: int
    hi: int
    spf: np.ndarray
    radical: np.ndarray
    omega1: np.ndarray
    omega3: np.ndarray
    squarefree: np.ndarray

    def __len__(self):
        return self.hi - self.lo

    def __contains__(self, n):
        return self.lo <= n < self.hi


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (plain Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    is_p = np.ones(n + 1, dtype=bool)
    is_p[:2] = False
    is_p[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if is_p[p]:
            is_p[p * p :: 2 * p] = False
    out = np.flatnonzero(is_p).astype(np.int64)
    out.flags.writeable = False
    return out


def _sieving_primes(hi: int) -> np.ndarray:
    # every prime p with p*p < hi
    return np.ascontiguousarray(primes_up_to(math.isqrt(max(hi - 1, 1))))


def _check_range(lo: int, hi: int) -> None:
    if lo < 1 or lo >= hi:
        raise InvalidRangeError(f"need 1 <= lo < hi, got [{lo}, {hi})")
    bound = config.sieve_bound()
    if hi - 1 > bound:
        raise BoundExceededError(f"sieve range end {hi - 1} exceeds bound {bound}")


def build_sieve(lo: int, hi: int, backend=None) -> FactorSieve:
    """Sieve the half-open range ``[lo, hi)``."""
    lo, hi = int(lo), int(hi)
    _check_range(lo, hi)
    impl = kernels if backend is None else backend
    spf, rad, om1, om3, sqf = impl.sieve_segment(lo, hi, _sieving_primes(hi))
    return FactorSieve(lo, hi, spf, rad, om1, om3, sqf)


def profile(n: int, sieve: FactorSieve) -> SquarefreeProfile:
    if n not in sieve:
        raise OutOfRangeError(f"{n} not in sieve range [{sieve.lo}, {sieve.hi})")
    i = n - sieve.lo
    om1 = int(sieve.omega1[i])
    om3 = int(sieve.omega3[i])
    return SquarefreeProfile(
        n=n,
        is_squarefree=bool(sieve.squarefree[i]),
        omega=om1 + om3 + (1 if n % 2 == 0 else 0),
        omega1=om1,
        omega3=om3,
        radical=int(sieve.radical[i]),
    )


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division."""
    n = abs(int(n))
    if n == 0:
        raise ZeroInputError("cannot factor 0")
    if n > FACTOR_LIMIT:
        raise OutOfRangeError(f"|n| = {n} exceeds trial-division limit {FACTOR_LIMIT}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d, step = 5, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += step
        step = 6 - step
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def profile_int(n: int) -> SquarefreeProfile:
    """Profile of a single positive integer without building a sieve."""
    if n < 1:
        raise OutOfRangeError("profile needs n >= 1")
    f = factorize(n)
    return SquarefreeProfile(
        n=n,
        is_squarefree=all(e == 1 for e in f.values()),
        omega=len(f),
        omega1=sum(1 for p in f if p % 4 == 1),
        omega3=sum(1 for p in f if p % 4 == 3),
        radical=math.prod(f),
    )


def squarefree_part(n: int) -> int:
    """sqf(n): n stripped of its largest square divisor, sign kept."""
    if n == 0:
        raise ZeroInputError("squarefree part of 0 is undefined")
    core = math.prod(p for p, e in factorize(n).items() if e % 2)
    return core if n > 0 else -core


def radical(n: int) -> int:
    return math.prod(factorize(n))


def is_squarefree(n: int) -> bool:
    return n != 0 and all(e == 1 for e in factorize(n).values())


def sqf_mul(a: int, b: int) -> int:
    """sqf(a*b) for squarefree a, b."""
    g = math.gcd(a, b)
    return (a // g) * (b // g)


def iroot(x: int, e: int) -> int:
    """Largest B >= 0 with B**e <= x, by integer bisection."""
    if x < 0 or e < 1:
        raise ValueError("iroot needs x >= 0 and e >= 1")
    if x < 2 or e == 1:
        return x
    lo, hi = 1, 1 << (x.bit_length() // e + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**e <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _pieces(cuts: list[int]) -> list[tuple[int, int]]:
    seg = config.segment_size()
    out = []
    lo = 1
    for cut in cuts:
        while lo < cut:
            hi = min(cut, lo + seg)
            out.append((lo, hi))
            lo = hi
    return out


def odd_squarefree_histograms(bounds, threads=None, backend=None) -> dict[int, np.ndarray]:
    """For each bound B, the table hist[a, b] counting odd squarefree n <= B
    with omega1(n) = a and omega3(n) = b.

    One streaming pass covers all bounds. Pieces are reduced in ascending
    order, so the result does not depend on ``threads``.
    """
    bounds = sorted({int(b) for b in bounds})
    if not bounds:
        return {}
    if bounds[0] < 0:
        raise InvalidRangeError("bounds must be nonnegative")
    top = bounds[-1]
    if top > config.sieve_bound():
        raise BoundExceededError(f"bound {top} exceeds sieve bound {config.sieve_bound()}")
    impl = kernels if backend is None else backend
    primes = _sieving_primes(top + 1)
    cuts = [b + 1 for b in bounds if b >= 1]
    pieces = _pieces(cuts)

    def work(piece):
        return impl.odd_squarefree_histogram(piece[0], piece[1], primes, HIST_WIDTH)

    nthreads = config.threads() if threads is None else max(1, int(threads))
    if nthreads > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            parts = list(pool.map(work, pieces))
    else:
        parts = [work(p) for p in pieces]

    acc = np.zeros((HIST_WIDTH, HIST_WIDTH), dtype=np.int64)
    out = {}
    cut_set = set(cuts)
    for (lo, hi), part in zip(pieces, parts):
        acc = acc + part
        if hi in cut_set:
            out[hi - 1] = acc.copy()
    for b in bounds:
        if b < 1:
            out[b] = np.zeros((HIST_WIDTH, HIST_WIDTH), dtype=np.int64)
    return out


def histogram_terms(hist: np.ndarray):
    """Nonzero cells of a histogram as (omega1, omega3, count) with Python ints."""
    a_idx, b_idx = np.nonzero(hist)
    return [(int(a), int(b), int(hist[a, b])) for a, b in zip(a_idx, b_idx)]
