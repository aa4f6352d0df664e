"""Verification suites: exact formulas against brute force, global counts
against enumeration, and the analytic checks on the leading constant.

Each check stops at its first counterexample. Nothing here reads the clock,
so a suite's output depends only on its parameters and seed.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import arith
from .asymptotics import H1, constant_Ck, ctx, fit_leading, lower_order_check
from .countform import (
    ALL_KINDS,
    Kind,
    derive_family,
    eval_count,
    eval_point,
    geometric_pair_sum,
    leading_coefficient_expected,
    parity_subset_count,
)
from .fields import FieldKey, Mod4Class
from .globalcount import count_N_many, radical_bound
from .oracle import FieldFilter, count_upto, enumerate_by_discriminant, enumerate_by_radical

SUITES = ("formulas", "global", "asymptotics")
TEST_PRIMES = (3, 5, 7, 13, 17, 29)
FIT_GRID = tuple(10**e for e in range(8, 15))


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    cases: int
    detail: str = ""

    def row(self) -> dict:
        return {
            "suite": self.suite,
            "check": self.name,
            "status": "pass" if self.passed else "fail",
            "cases": self.cases,
            "detail": self.detail,
        }


class _Tally:
    """Counts cases and keeps the first failure."""

    def __init__(self, suite, name):
        self.suite, self.name = suite, name
        self.cases = 0
        self.failure = None

    def expect(self, label, expected, got):
        self.cases += 1
        if self.failure is None and expected != got:
            self.failure = f"{label}, expected={expected}, got={got}"

    def close(self, info="") -> Check:
        if self.failure:
            return Check(self.suite, self.name, False, self.cases, self.failure)
        return Check(self.suite, self.name, True, self.cases, info)


# formulas


@lru_cache(maxsize=None)
def _fields_with_radical(R: int, k: int) -> frozenset[FieldKey]:
    return frozenset(enumerate_by_radical(R, k))


def kind_filter(kind: Kind) -> FieldFilter:
    cls4 = Mod4Class(kind.mod4) if kind.mod4 else None
    return FieldFilter(totally_real_only=kind.totally_real, mod4_class=cls4)


def oracle_kind_count(k: int, kind: Kind, P: int) -> int:
    """Brute-force count of the fields a family describes at P (radical 2P for the 2P classes)."""
    R = 2 * P if kind.doubled else P
    filt = kind_filter(kind)
    return sum(1 for key in _fields_with_radical(R, k) if filt.accepts(key))


def radical_grid(max_omega: int) -> list[int]:
    out = []
    for w in range(0, max_omega + 1):
        for combo in itertools.combinations(TEST_PRIMES, w):
            out.append(math.prod(combo))
    return sorted(out)


def check_formula_oracle(ks=(2, 3), max_omega=4) -> Check:
    t = _Tally("formulas", "formula_vs_oracle")
    for k in ks:
        for kind in ALL_KINDS:
            fam = derive_family(k, kind)
            for P in radical_grid(max_omega):
                inputs = [P] if kind.mod4 else [P, 2 * P]
                for n in inputs:
                    got = eval_count(fam, arith.profile_int(n))
                    t.expect(f"k={k} kind={kind.value} P={n}", oracle_kind_count(k, kind, n), got)
    return t.close()


def check_oracle_routes(ks=(2, 3), max_omega=4) -> Check:
    t = _Tally("formulas", "oracle_routes_agree")
    for k in ks:
        for P in radical_grid(max_omega):
            for n in (P, 2 * P):
                a = enumerate_by_radical(n, k, method="normal")
                b = enumerate_by_radical(n, k, method="subgroup")
                t.expect(f"k={k} P={n}", len(b), len(a) if a == b else -1)
    return t.close()


# (k, kind, P, value) pairs checked by name
NAMED_VALUES = (
    (2, Kind.R, 3, 0),
    (2, Kind.R, 15, 1),
    (2, Kind.R, 105, 4),
    (3, Kind.R, 3, 0),
    (3, Kind.R, 15, 0),
    (3, Kind.R, 105, 1),
    (3, Kind.R, 1365, 11),
    (2, Kind.Q, 3, 1),
    (2, Kind.Q, 15, 5),
    (2, Kind.Q, 105, 17),
    (2, Kind.Q21, 1, 0),
    (2, Kind.Q23, 1, 1),
    (2, Kind.R11, 65, 1),
    (2, Kind.R11, 21, 0),
)


def check_named_values() -> Check:
    t = _Tally("formulas", "named_values")
    for k, kind, P, value in NAMED_VALUES:
        got = eval_count(derive_family(k, kind), arith.profile_int(P))
        t.expect(f"k={k} kind={kind.value} P={P}", value, got)
        t.expect(f"oracle k={k} kind={kind.value} P={P}", value, oracle_kind_count(k, kind, P))
    return t.close()


def _poly_equal(t, label, lhs, rhs):
    lhs = lhs.with_offsets(rhs.offsets) if lhs.variables == rhs.variables else lhs
    t.expect(label, str(rhs), str(lhs))


def check_identities(ks=range(2, 6)) -> Check:
    t = _Tally("formulas", "identities")
    for k in ks:
        fam = {kind: derive_family(k, kind) for kind in ALL_KINDS}
        R, Q = fam[Kind.R].poly, fam[Kind.Q].poly
        R_prev = derive_family(k - 1, Kind.R).poly
        _poly_equal(t, f"k={k} Q=2^k R_k + R_(k-1)", (2**k) * R + R_prev, Q)
        _poly_equal(t, f"k={k} Q(1,1)=R", fam[Kind.Q11].poly, R)
        _poly_equal(t, f"k={k} Q(1,1)+Q(3,1)=Q", fam[Kind.Q11].poly + fam[Kind.Q31].poly, Q)
        _poly_equal(t, f"k={k} Q(2,1)+Q(2,3)=Q(2P)", fam[Kind.Q21].poly + fam[Kind.Q23].poly, Q.shift(1))
        _poly_equal(t, f"k={k} R(1,1)+R(3,1)=R", fam[Kind.R11].poly + fam[Kind.R31].poly, R.split(0))
        _poly_equal(t, f"k={k} R(2,1)+R(2,3)=R(2P)", fam[Kind.R21].poly + fam[Kind.R23].poly, R.split(1))
        # the same sums pointwise, empty radical included
        for w3 in range(0, 4):
            for w1 in range(0, 4):
                w = w1 + w3
                lhs = eval_point(fam[Kind.R11], w3, w1) + eval_point(fam[Kind.R31], w3, w1)
                t.expect(f"k={k} R classes at ({w3},{w1})", eval_point(fam[Kind.R], w), lhs)
                lhs = eval_point(fam[Kind.R21], w3, w1) + eval_point(fam[Kind.R23], w3, w1)
                t.expect(f"k={k} R 2P classes at ({w3},{w1})", eval_point(fam[Kind.R], w + 1), lhs)
        for kind in ALL_KINDS:
            bases, coef = leading_coefficient_expected(k, kind)
            got = fam[kind].poly.leading()
            t.expect(f"k={k} leading {kind.value}", (bases, coef), got)
    return t.close()


def check_geometric_pair_sum(seed: int, n_cases=1000) -> Check:
    t = _Tally("formulas", "geometric_pair_sum")
    rng = random.Random(seed)
    while t.cases < n_cases:
        a, b = rng.randint(-31, 31), rng.randint(-31, 31)
        if a == b:
            continue
        n = rng.randint(0, 20)
        i = rng.randint(0, n)
        literal = sum(Fraction(a) ** (j - i - 1) * Fraction(b) ** (n - j) for j in range(i + 1, n + 1))
        t.expect(f"a={a} b={b} n={n} i={i}", literal, geometric_pair_sum(a, b, n, i))
    return t.close()


def parity_table(a: int, b: int) -> np.ndarray:
    """Histogram of the XOR of every sequence of a nonempty subsets of a
    b-set, indexed by the parity vector as a bitmask."""
    subsets = np.arange(1, 1 << b, dtype=np.int16)
    acc = np.zeros(1, dtype=np.int16)
    for _ in range(a):
        acc = (acc[:, None] ^ subsets[None, :]).ravel()
    return np.bincount(acc, minlength=1 << b)


def check_parity_subset_count(max_a=6, max_b=4) -> Check:
    t = _Tally("formulas", "parity_subset_count")
    for a in range(0, max_a + 1):
        for b in range(1, max_b + 1):
            table = parity_table(a, b)
            t.expect(f"a={a} b={b} total", (2**b - 1) ** a, int(table.sum()))
            t.expect(f"a={a} b={b} all_even", int(table[0]), parity_subset_count(a, b, True))
            for v in range(1, 1 << b):
                t.expect(f"a={a} b={b} vector={v}", int(table[v]), parity_subset_count(a, b, False))
    return t.close()


def run_formulas(seed: int, max_omega: int) -> list[Check]:
    return [
        check_named_values(),
        check_formula_oracle(max_omega=max_omega),
        check_oracle_routes(max_omega=min(max_omega, 4)),
        check_identities(),
        check_geometric_pair_sum(seed),
        check_parity_subset_count(),
    ]


# global counts


def _compare_counts(t, k, tr, xs, fields, threads):
    counts = count_N_many(k, xs, tr, threads=threads)
    for x in sorted(xs):
        t.expect(f"k={k} tr={tr} x={x}", count_upto(fields, x), counts[x])
    return counts


def change_points(fields) -> list[int]:
    ds = sorted({D for D, _ in fields})
    return sorted({x for D in ds for x in (D - 1, D)})


def check_change_points(k: int, limit: int, threads=None) -> Check:
    t = _Tally("global", f"change_points_k{k}_upto_{limit}")
    for tr in (False, True):
        filt = FieldFilter(totally_real_only=tr)
        fields = enumerate_by_discriminant(limit, k, filt)
        xs = [x for x in change_points(fields) if x <= limit] + [limit]
        counts = _compare_counts(t, k, tr, xs, fields, threads)
        values = [counts[x] for x in sorted(counts)]
        t.expect(f"k={k} tr={tr} monotone", True, all(a <= b for a, b in zip(values, values[1:])))
    return t.close()


def check_random_x(seed: int, n_points=200, limit=10**8, threads=None) -> Check:
    t = _Tally("global", f"random_x_k2_upto_{limit}")
    rng = random.Random(seed)
    xs = sorted(rng.randint(1, limit) for _ in range(n_points))
    for tr in (False, True):
        fields = enumerate_by_discriminant(limit, 2, FieldFilter(totally_real_only=tr))
        _compare_counts(t, 2, tr, xs, fields, threads)
    return t.close(f"seed={seed}")


def check_named_counts(threads=None) -> Check:
    t = _Tally("global", "named_counts")
    for k, x, tr, value in ((2, 143, False, 0), (2, 144, False, 1), (2, 256, False, 3), (2, 1600, True, 1)):
        t.expect(f"k={k} x={x} tr={tr}", value, count_N_many(k, [x], tr, threads=threads)[x])
    t.expect("class sums k=2 x=256", [1, 1, 0, 1], count_N_many(2, [256], detail=True, threads=threads)[256])
    return t.close()


def check_iroot(seed: int) -> Check:
    t = _Tally("global", "integer_root")
    rng = random.Random(seed)
    xs = [rng.randint(0, 10**30) for _ in range(500)] + [b**e + d for b in range(1, 40) for e in (2, 4, 8) for d in (-1, 0, 1)]
    for x in xs:
        if x < 0:
            continue
        for k in (2, 3, 4):
            e = 2 ** (k - 1)
            B = radical_bound(x, k)
            t.expect(f"x={x} k={k}", True, B**e <= x < (B + 1) ** e)
    return t.close()


def run_global(seed: int, threads=None) -> list[Check]:
    return [
        check_named_counts(threads),
        check_change_points(2, 10**6, threads),
        check_random_x(seed, threads=threads),
        check_change_points(3, 10**9, threads),
        check_iroot(seed),
    ]


# asymptotics


def _num(v, digits=12) -> str:
    return ctx.nstr(v, digits)


def check_h1_identity() -> Check:
    h = H1(1, 10**7)
    dev = abs(h.value * ctx.pi**2 / 4 - 1)
    return Check("asymptotics", "H1(1)*pi^2/4=1", bool(dev < ctx.mpf("1e-4")), 1, f"deviation={_num(dev, 6)}")


def check_constant_consistency() -> Check:
    t = _Tally("asymptotics", "C_k_two_forms")
    worst = ctx.mpf(0)
    for k in (2, 3, 4):
        res = constant_Ck(k, 10**7)
        worst = max(worst, res.residual)
        t.expect(f"k={k} residual<1e-12", True, bool(res.residual < ctx.mpf("1e-12")))
    t.expect("k=2 prefactor", Fraction(23, 3072), constant_Ck(2, 10**7).prefactor)
    return t.close(f"max_residual={_num(worst, 6)}")


def check_fit(threads=None) -> Check:
    t = _Tally("asymptotics", "fit_leading_k2")
    info = []
    for tr in (False, True):
        fit = fit_leading(2, FIT_GRID, totally_real=tr, threads=threads)
        info.append(f"tr={tr}:ratio={_num(fit.ratio, 8)}")
        t.expect(f"tr={tr} ratio in [0.8,1.2]", True, bool(0.8 <= fit.ratio <= 1.2))
        t.expect(f"tr={tr} residuals shrink", True, fit.residuals_shrink)
    return t.close(" ".join(info))


def check_lower_order(threads=None) -> Check:
    t = _Tally("asymptotics", "lower_order_decreasing")
    info = []
    for M, N in ((3, 1), (1, -1)):
        rep = lower_order_check(M, N, [10**5, 10**6, 10**7], threads=threads)
        info.append(f"({M},{N}):" + "/".join(_num(r, 6) for r in rep.ratios))
        t.expect(f"(M,N)=({M},{N})", True, rep.decreasing)
    return t.close(" ".join(info))


def run_asymptotics(threads=None) -> list[Check]:
    return [
        check_h1_identity(),
        check_constant_consistency(),
        check_fit(threads),
        check_lower_order(threads),
    ]


def run_suite(suite: str, seed: int = 0, max_omega: int = 4, threads=None) -> list[Check]:
    suites = SUITES if suite == "all" else (suite,)
    out: list[Check] = []
    for s in suites:
        if s == "formulas":
            out += run_formulas(seed, max_omega)
        elif s == "global":
            out += run_global(seed, threads)
        elif s == "asymptotics":
            out += run_asymptotics(threads)
        else:
            raise ValueError(f"unknown suite {s!r}")
    return out
