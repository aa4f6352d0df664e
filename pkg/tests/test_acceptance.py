"""Acceptance criteria, one test each.

Every test appends a PASS/FAIL line to ``RESULTS``; the lines are printed in
the pytest terminal summary (see conftest.py) and when this file is run
directly with ``python tests/test_acceptance.py``.
"""

import itertools
import math
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from multiquad import arith
from multiquad.asymptotics import H1, constant_Ck, ctx, fit_leading, lower_order_check
from multiquad.countform import (
    ALL_KINDS,
    Kind,
    derive_family,
    eval_count,
    geometric_pair_sum,
    leading_coefficient_expected,
    parity_subset_count,
)
from multiquad.globalcount import count_N, count_N_many
from multiquad.oracle import FieldFilter, count_upto, enumerate_by_discriminant
from multiquad.verify import oracle_kind_count, parity_table

RESULTS: list[str] = []
PRIMES = (3, 5, 7, 13, 17, 29)


@contextmanager
def criterion(number, title, limit_s):
    start = time.perf_counter()
    notes = []
    try:
        yield notes
    except BaseException:
        elapsed = time.perf_counter() - start
        RESULTS.append(f"criterion {number} FAIL  {title} ({elapsed:.1f} s) {' '.join(notes)}")
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit_s
    status = "PASS" if ok else "FAIL"
    RESULTS.append(f"criterion {number} {status}  {title} ({elapsed:.1f} s, limit {limit_s} s) {' '.join(notes)}")
    assert ok, f"runtime {elapsed:.1f} s over {limit_s} s"


def test_criterion_1_formula_oracle():
    with criterion(1, "formula vs brute-force enumeration", 60) as notes:
        cases = 0
        odd = [math.prod(c) for w in range(5) for c in itertools.combinations(PRIMES, w)]
        for k in (2, 3):
            for kind in ALL_KINDS:
                fam = derive_family(k, kind)
                # P = 1 covers the empty radical; mod-4 2P kinds then see radical 2
                inputs = odd if kind.mod4 else odd + [2 * P for P in odd]
                for n in inputs:
                    assert eval_count(fam, arith.profile_int(n)) == oracle_kind_count(k, kind, n), (k, kind, n)
                    cases += 1
        ev = lambda k, kind, n: eval_count(derive_family(k, kind), arith.profile_int(n))
        assert [ev(2, Kind.R, n) for n in (3, 15, 105)] == [0, 1, 4]
        assert [ev(3, Kind.R, n) for n in (3, 15, 105, 1365)] == [0, 0, 1, 11]
        assert [ev(2, Kind.Q, n) for n in (3, 15, 105)] == [1, 5, 17]
        assert ev(2, Kind.Q21, 1) == 0 and ev(2, Kind.Q23, 1) == 1
        assert ev(2, Kind.R11, 65) == 1 and ev(2, Kind.R11, 21) == 0
        notes.append(f"[{cases} radicals x kinds, all exact]")


def test_criterion_2_identities():
    derive_family.cache_clear()
    with criterion(2, "structural identities and leading coefficients, k=2..5", 1) as notes:
        checked = 0
        for k in range(2, 6):
            f = {kind: derive_family(k, kind).poly for kind in ALL_KINDS}
            R, Q = f[Kind.R], f[Kind.Q]
            assert ((2**k) * R + derive_family(k - 1, Kind.R).poly).as_dict() == Q.as_dict()
            assert f[Kind.Q11].as_dict() == R.as_dict()
            assert (f[Kind.Q11] + f[Kind.Q31]).as_dict() == Q.as_dict()
            assert (f[Kind.Q21] + f[Kind.Q23]).as_dict() == Q.shift(1).with_offsets((0,)).as_dict()
            assert (f[Kind.R11] + f[Kind.R31]).as_dict() == R.split(0).as_dict()
            assert (f[Kind.R21] + f[Kind.R23]).as_dict() == R.split(1).as_dict()
            for kind in ALL_KINDS:
                assert f[kind].leading() == leading_coefficient_expected(k, kind), (k, kind)
            checked += 6 + len(ALL_KINDS)
        notes.append(f"[{checked} exact equalities, derivation included]")


def _compare(k, tr, xs, limit):
    fields = enumerate_by_discriminant(limit, k, FieldFilter(totally_real_only=tr))
    counts = count_N_many(k, xs, tr)
    for x in xs:
        assert counts[x] == count_upto(fields, x), (k, tr, x)
    return fields


@pytest.mark.slow
def test_criterion_3_global_counts():
    with criterion(3, "global counts vs enumeration", 300) as notes:
        assert count_N(2, 143) == 0 and count_N(2, 144) == 1 and count_N(2, 256) == 3
        assert count_N(2, 1600, totally_real=True) == 1
        n_points = 0
        for tr in (False, True):
            fields = enumerate_by_discriminant(10**6, 2, FieldFilter(totally_real_only=tr))
            xs = sorted({x for D, _ in fields for x in (D - 1, D)})
            _compare(2, tr, xs, 10**6)
            n_points += len(xs)
        rng = random.Random(20240601)
        xs = sorted(rng.randint(1, 10**8) for _ in range(200))
        for tr in (False, True):
            _compare(2, tr, xs, 10**8)
        for tr in (False, True):
            fields = enumerate_by_discriminant(10**9, 3, FieldFilter(totally_real_only=tr))
            xs = sorted({x for D, _ in fields for x in (D - 1, D)} | {10**9})
            _compare(3, tr, xs, 10**9)
            n_points += len(xs)
        notes.append(f"[{n_points} change points, 200 random x, seed 20240601]")


def test_criterion_4_pair_sums_and_parity():
    with criterion(4, "pair sums and parity counts vs literal enumeration", 10) as notes:
        rng = random.Random(4)
        for _ in range(1000):
            a, b = rng.sample(range(-31, 32), 2)
            n = rng.randint(0, 20)
            i = rng.randint(0, n)
            literal = sum(Fraction(a) ** (j - i - 1) * Fraction(b) ** (n - j) for j in range(i + 1, n + 1))
            assert geometric_pair_sum(a, b, n, i) == literal
        for a in range(0, 7):
            for b in range(1, 5):
                table = parity_table(a, b)
                assert table.sum() == (2**b - 1) ** a
                assert table[0] == parity_subset_count(a, b, True)
                assert all(v == parity_subset_count(a, b, False) for v in table[1:])
        t = parity_table(3, 2)
        assert t[0] == 6 and all(v == 7 for v in t[1:]) and t.sum() == 27
        notes.append("[1000 random sums; a<=6, b<=4 exhaustive]")


def test_criterion_5_h1_identity():
    with criterion(5, "H(1) at weight 1 equals 4/pi^2", 30) as notes:
        h = H1(1, 10**7)
        dev = abs(h.value * ctx.pi**2 / 4 - 1)
        notes.append(f"[|H1*pi^2/4 - 1| = {ctx.nstr(dev, 3)}, tolerance 1e-4]")
        assert dev < 1e-4


def test_criterion_6_constant_consistency():
    with criterion(6, "two forms of C_k agree", 60) as notes:
        worst = 0
        for k in (2, 3, 4):
            res = constant_Ck(k, 10**7)
            assert res.residual < 1e-12, (k, res.residual)
            worst = max(worst, res.residual)
        assert constant_Ck(2, 10**7).prefactor == Fraction(23, 3072)
        notes.append(f"[max relative residual {ctx.nstr(worst, 3)}, prefactor 23/3072]")


@pytest.mark.slow
def test_criterion_7_leading_constant_fit(monkeypatch):
    monkeypatch.setenv("MULTIQUAD_SIEVE_BOUND", str(10**7))
    with criterion(7, "fitted leading coefficient within [0.8, 1.2] of C_2", 600) as notes:
        grid = [10**e for e in range(8, 15)]
        for tr in (False, True):
            fit = fit_leading(2, grid, totally_real=tr)
            notes.append(f"[tr={tr}: ratio {ctx.nstr(fit.ratio, 6)}, residual {ctx.nstr(fit.relative_residuals[0], 3)} -> {ctx.nstr(fit.relative_residuals[-1], 3)}]")
            assert 0.8 <= fit.ratio <= 1.2
            assert fit.residuals_shrink


def test_criterion_8_lower_order():
    with criterion(8, "twisted sums fall below the leading order", 60) as notes:
        for M, N in ((3, 1), (1, -1)):
            rep = lower_order_check(M, N, [10**5, 10**7])
            notes.append(f"[({M},{N}): r(1e5)={ctx.nstr(rep.ratios[0], 4)}, r(1e7)={ctx.nstr(rep.ratios[1], 4)}]")
            assert rep.ratios[1] < rep.ratios[0]


@pytest.mark.slow
def test_criterion_9_determinism():
    with criterion(9, "verify --suite all byte-identical across worker counts", 600) as notes:
        outputs = {}
        for n in (1, 4, 8):
            proc = subprocess.run(
                [sys.executable, "-m", "multiquad", "verify", "--suite", "all", "--seed", "7", "--threads", str(n)],
                capture_output=True,
                env=dict(os.environ),
                check=False,
            )
            assert proc.returncode == 0, proc.stderr.decode()
            outputs[n] = proc.stdout
        assert outputs[1] == outputs[4] == outputs[8]
        notes.append(f"[{len(outputs[1])} bytes, {outputs[1].count(b'pass')} checks passed]")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
