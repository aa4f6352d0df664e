import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multiquad import arith
from multiquad.errors import BoundExceededError, InvalidRangeError, OutOfRangeError, ZeroInputError


def test_first_smallest_prime_factors():
    s = arith.build_sieve(2, 10)
    assert s.spf.tolist() == [2, 3, 2, 5, 2, 7, 2, 3]


def test_sieve_window_not_starting_at_one():
    s = arith.build_sieve(90, 92)
    assert s.spf[0] == 2 and s.spf[1] == 7


def test_empty_range_rejected():
    with pytest.raises(InvalidRangeError):
        arith.build_sieve(10, 10)
    with pytest.raises(InvalidRangeError):
        arith.build_sieve(0, 10)


def test_bound_exceeded(monkeypatch):
    monkeypatch.setenv("MULTIQUAD_SIEVE_BOUND", "1000")
    arith.build_sieve(1, 1001)
    with pytest.raises(BoundExceededError):
        arith.build_sieve(1, 1002)
    with pytest.raises(BoundExceededError):
        arith.odd_squarefree_histograms([1001])


def test_sieve_matches_trial_division():
    lo, hi = 999_000, 1_001_000
    s = arith.build_sieve(lo, hi)
    for n in range(lo, hi, 7):
        f = arith.factorize(n)
        p = arith.profile(n, s)
        assert s.spf[n - lo] == min(f)
        assert p.radical == math.prod(f)
        assert p.is_squarefree == all(e == 1 for e in f.values())
        assert p.omega == len(f)
        assert p.omega1 == sum(1 for q in f if q % 4 == 1)
        assert p.omega3 == sum(1 for q in f if q % 4 == 3)


def test_profile_examples():
    p = arith.profile_int(105)
    assert (p.omega, p.omega1, p.omega3, p.is_squarefree, p.radical) == (3, 1, 2, True, 105)
    p = arith.profile_int(1)
    assert (p.omega, p.is_squarefree, p.radical) == (0, True, 1)
    p = arith.profile_int(12)
    assert (p.omega, p.is_squarefree, p.radical) == (2, False, 6)
    s = arith.build_sieve(1, 200)
    for n in (1, 12, 105, 199):
        assert arith.profile(n, s) == arith.profile_int(n)


def test_profile_out_of_range():
    s = arith.build_sieve(10, 20)
    with pytest.raises(OutOfRangeError):
        arith.profile(20, s)


def test_squarefree_part_examples():
    assert arith.squarefree_part(12) == 3
    assert arith.squarefree_part(-18) == -2
    assert arith.squarefree_part(-1) == -1
    with pytest.raises(ZeroInputError):
        arith.squarefree_part(0)


@given(st.integers(min_value=-10**9, max_value=10**9).filter(bool))
def test_squarefree_part_reconstructs(n):
    s = arith.squarefree_part(n)
    k2 = n // s
    assert k2 > 0 and n % s == 0
    assert math.isqrt(k2) ** 2 == k2
    assert arith.is_squarefree(s)


@given(st.integers(min_value=1, max_value=10**9))
def test_radical_of_squarefree_part_divides(n):
    assert arith.radical(n) % arith.radical(arith.squarefree_part(n)) == 0
    if arith.is_squarefree(n):
        assert arith.radical(n) == n


@given(st.integers(min_value=0, max_value=10**40), st.integers(min_value=1, max_value=16))
def test_iroot_brackets(x, e):
    b = arith.iroot(x, e)
    assert b**e <= x < (b + 1) ** e


def test_iroot_exact_powers():
    for b in range(0, 200):
        for e in (2, 4, 8):
            x = b**e
            assert arith.iroot(x, e) == b
            if x:
                assert arith.iroot(x - 1, e) == b - 1


def test_sqf_mul_group_law():
    rng = random.Random(3)
    sqf = [n for n in range(-300, 300) if n and arith.is_squarefree(n)]
    for _ in range(2000):
        a, b = rng.choice(sqf), rng.choice(sqf)
        assert arith.sqf_mul(a, b) == arith.squarefree_part(a * b)


def _brute_histogram(B):
    hist = np.zeros((arith.HIST_WIDTH, arith.HIST_WIDTH), dtype=np.int64)
    for n in range(1, B + 1, 2):
        p = arith.profile_int(n)
        if p.is_squarefree:
            hist[p.omega1, p.omega3] += 1
    return hist


def test_histograms_against_brute_force():
    bounds = [0, 1, 2, 3, 100, 9999, 30000]
    got = arith.odd_squarefree_histograms(bounds)
    for b in bounds:
        assert np.array_equal(got[b], _brute_histogram(b)), b


def test_histograms_segmented_equal_monolithic(monkeypatch):
    bounds = [10**5, 3 * 10**5 + 7, 10**6]
    whole = arith.odd_squarefree_histograms(bounds)
    monkeypatch.setenv("MULTIQUAD_SEGMENT_SIZE", "4099")
    for threads in (1, 4):
        parts = arith.odd_squarefree_histograms(bounds, threads=threads)
        for b in bounds:
            assert np.array_equal(parts[b], whole[b])


def test_segmented_profiles_match_monolithic():
    top = 2 * 10**6
    whole = arith.build_sieve(1, top)
    cuts = list(range(1, top, 65537)) + [top]
    segs = [arith.build_sieve(lo, hi) for lo, hi in zip(cuts, cuts[1:])]
    rng = np.random.default_rng(11)
    idx = rng.integers(0, top - 1, size=10**5)
    for name in ("spf", "radical", "omega1", "omega3", "squarefree"):
        joined = np.concatenate([getattr(s, name) for s in segs])
        assert np.array_equal(joined[idx], getattr(whole, name)[idx]), name


def test_factorize_limits():
    with pytest.raises(ZeroInputError):
        arith.factorize(0)
    with pytest.raises(OutOfRangeError):
        arith.factorize(arith.FACTOR_LIMIT + 1)
    assert arith.factorize(-360) == {2: 3, 3: 2, 5: 1}
