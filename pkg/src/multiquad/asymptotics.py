"""Leading constant C_k: Euler products with rigorous truncation bounds, two
independent assemblies of C_k, and empirical checks against exact counts."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from . import arith
from .countform import F_k
from .errors import BoundTooSmallError, DomainError, IllConditionedGridError
from .globalcount import count_N_many, sum_A_many

PREC = 128
# mantissa width of the integer accumulator in _odd_euler_product
_MANTISSA = 192

ctx = mpmath.MPContext()
ctx.prec = PREC


def _mpf(v):
    if isinstance(v, Fraction):
        return ctx.mpf(v.numerator) / v.denominator
    return ctx.mpf(v)


@dataclass(frozen=True)
class EulerProduct:
    M: int
    prime_bound: int
    value: mpmath.mpf
    tail_bound: mpmath.mpf

    @property
    def lower(self):
        return self.value * ctx.exp(-self.tail_bound)

    @property
    def upper(self):
        return self.value * ctx.exp(self.tail_bound)

    def contains(self, v) -> bool:
        return self.lower <= v <= self.upper


@lru_cache(maxsize=32)
def _odd_euler_product(M: int, B: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """prod over 2 < p <= B of (1 + M/p)(1 - 1/p)^M, with a bound on the
    accumulated relative rounding error.

    The running value is an integer mantissa times a power of two; each
    factor is applied exactly then floored, losing < 2^-(W-1) relative.
    """
    primes = arith.primes_up_to(B).tolist()[1:]
    W = _MANTISSA
    acc, exp = 1 << W, -W
    for p in primes:
        acc = acc * ((p + M) * (p - 1) ** M) // p ** (M + 1)
        short = W - acc.bit_length()
        if short > 0:
            acc <<= short
            exp -= short
    value = ctx.ldexp(ctx.mpf(acc), exp)
    rounding = ctx.mpf(len(primes) + 1) * ctx.ldexp(1, -(W - 2))
    return value, rounding


def H1(M: int, prime_bound: int) -> EulerProduct:
    """H(1) for weight M: (1/2)^M prod_{p != 2} (1 + M/p)(1 - 1/p)^M.

    Tail: with u = 1/p, g(u) = log(1 + M u) + M log(1 - u) has g(0) = 0 and
    g'(u) = -M(M+1)u / ((1 + M u)(1 - u)), so |g(u)| <= M(M+1) u^2 for
    u <= 1/2. Summing over p > B with sum_{p>B} 1/p^2 < 1/(B-1) bounds the
    log of the omitted factors by M(M+1)/(B-1).
    """
    if M < 1:
        raise DomainError("M must be >= 1")
    if prime_bound <= M + 1:
        raise BoundTooSmallError(f"prime bound {prime_bound} must exceed M + 1 = {M + 1}")
    odd, rounding = _odd_euler_product(M, prime_bound)
    value = odd * ctx.ldexp(1, -M)
    tail = ctx.mpf(M * (M + 1)) / (prime_bound - 1) + rounding
    return EulerProduct(M, prime_bound, value, tail)


def closed_form_prefactor(k: int) -> Fraction:
    """Rational factor of C_k in front of the odd-prime Euler product."""
    top = 2**k
    return (
        Fraction(4**k + 5 * top + 10, 32 * math.factorial(top - 1))
        * Fraction(1, top) ** (top - 2)
        * F_k(k)
    )


def class_weight(k: int) -> Fraction:
    """Sum of the four class contributions 1/(2^k-1) + 1/4 + 1/4 + (2^k-2)/16."""
    return Fraction(1, 2**k - 1) + Fraction(1, 4) + Fraction(1, 4) + Fraction(2**k - 2, 16)


@dataclass(frozen=True)
class ConstantResult:
    k: int
    prime_bound: int
    value: mpmath.mpf
    lower: mpmath.mpf
    upper: mpmath.mpf
    value_alt: mpmath.mpf
    residual: mpmath.mpf
    prefactor: Fraction


def constant_Ck(k: int, prime_bound: int = 10**7) -> ConstantResult:
    """C_k assembled two ways; ``residual`` is their relative difference."""
    if not 2 <= k <= 6:
        raise DomainError("k must be in 2..6")
    M = 2**k - 1
    h = H1(M, prime_bound)
    odd, _ = _odd_euler_product(M, prime_bound)
    pre = closed_form_prefactor(k)
    value = _mpf(pre) * odd
    alt = (
        _mpf(class_weight(k))
        * _mpf(F_k(k))
        * h.value
        / ctx.factorial(M - 1)
        * ctx.power(ctx.mpf(2) ** (k - 1), -(M - 1))
    )
    residual = abs(value - alt) / abs(value)
    t = h.tail_bound
    return ConstantResult(k, prime_bound, value, value * ctx.exp(-t), value * ctx.exp(t), alt, residual, pre)


@dataclass
class FitResult:
    k: int
    totally_real: bool
    grid: list[int]
    counts: list[int]
    coefficients: list  # ascending powers of log x
    alpha_hat: mpmath.mpf
    reference: mpmath.mpf
    relative_residuals: list

    @property
    def ratio(self):
        return self.alpha_hat / self.reference

    @property
    def residuals_shrink(self) -> bool:
        return self.relative_residuals[-1] < self.relative_residuals[0]


def fit_leading(k: int, x_grid, totally_real: bool = False, prime_bound: int = 10**7, threads=None) -> FitResult:
    """Least-squares fit of N_k(x) / x^(1/2^(k-1)) by a polynomial of degree
    2^k - 2 in log x; the top coefficient estimates C_k (C_k / 2^k if totally real)."""
    grid = sorted({int(x) for x in x_grid})
    deg = 2**k - 2
    if len(grid) < 2**k + 2:
        raise IllConditionedGridError(f"need at least {2**k + 2} distinct grid points, got {len(grid)}")
    if grid[0] < 2 or grid[-1] < 1000 * grid[0]:
        raise IllConditionedGridError("grid must span at least three decades")
    counts_by_x = count_N_many(k, grid, totally_real, threads=threads)
    counts = [counts_by_x[x] for x in grid]
    e = 2 ** (k - 1)
    logs = [ctx.log(x) for x in grid]
    ys = [ctx.mpf(c) / ctx.root(x, e) for c, x in zip(counts, grid)]
    scales = [max(abs(L) ** j for L in logs) for j in range(deg + 1)]
    A = ctx.matrix([[L**j / scales[j] for j in range(deg + 1)] for L in logs])
    sol, _ = ctx.qr_solve(A, ctx.matrix(ys))
    coefs = [sol[j] / scales[j] for j in range(deg + 1)]
    alpha = coefs[-1]
    C = constant_Ck(k, prime_bound).value
    reference = C / 2**k if totally_real else C
    rel = []
    for L, y in zip(logs, ys):
        fitted = sum(c * L**j for j, c in enumerate(coefs))
        rel.append(abs(y - fitted) / (abs(alpha) * L**deg))
    return FitResult(k, totally_real, grid, counts, coefs, alpha, reference, rel)


@dataclass
class LowerOrderReport:
    M: int
    N: int
    grid: list[int]
    sums: list[int]
    ratios: list

    @property
    def decreasing(self) -> bool:
        """Ratio at the largest x is below the ratio at the smallest x."""
        return self.ratios[-1] < self.ratios[0]

    @property
    def monotone(self) -> bool:
        return all(b < a for a, b in zip(self.ratios, self.ratios[1:]))


def lower_order_check(M: int, N: int, x_grid, threads=None) -> LowerOrderReport:
    """r(x) = |A_{M,N}(x)| / (x (log x)^(M-1)) along the grid.

    For N < M the Dirichlet series has a pole of order (M+N)/2 < M at s = 1,
    so r should fall as x grows; N = M is the full-order control.
    """
    if M < 1 or M % 2 == 0 or not -1 <= N <= M:
        raise DomainError("need odd M >= 1 and -1 <= N <= M")
    grid = sorted({int(x) for x in x_grid})
    sums = sum_A_many([(M, N)], grid, threads=threads)
    vals = [sums[(M, N, x)] for x in grid]
    ratios = [abs(ctx.mpf(v)) / (x * ctx.log(x) ** (M - 1)) for v, x in zip(vals, grid)]
    return LowerOrderReport(M, N, grid, vals, ratios)


def leading_term_ratio(M: int, x: int, prime_bound: int = 10**7, threads=None):
    """A_M(x) (M-1)! / (H(1) x (log x)^(M-1)); tends to 1 slowly."""
    a = sum_A_many([(M, M)], [x], threads=threads)[(M, M, x)]
    h = H1(M, prime_bound).value
    return ctx.mpf(a) * ctx.factorial(M - 1) / (h * x * ctx.log(x) ** (M - 1))
