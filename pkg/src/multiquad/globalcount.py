"""Exact N_k(x) and N_k^+(x) as four radical-bounded sums of field counts.

With e = 2^(k-1) and B = floor(x^(1/e)), the fields with D(K) <= x split by
mod-4 class into sums over odd squarefree P of

    Q(1,1)(P)   for P <= B,       Q(3,1)(P)   for 4P <= B,
    Q(2,1)(2P)  for 8P <= B,      Q(2,3)(2P)  for 16P <= B,

(R kinds for totally real fields). Each summand depends on P only through
(omega1(P), omega3(P)), so one histogram per bound carries the whole sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import arith
from .countform import CountFamily, Kind, derive_family, eval_point
from .errors import DomainError, InternalError

CLASS_TERMS = (
    # (general kind, totally real kind, bound divisor)
    (Kind.Q11, Kind.R11, 1),
    (Kind.Q31, Kind.R31, 4),
    (Kind.Q21, Kind.R21, 8),
    (Kind.Q23, Kind.R23, 16),
)


@dataclass(frozen=True)
class SieveSum:
    M: int
    N: int
    x: int
    value: int


def radical_bound(x: int, k: int) -> int:
    if k < 2:
        raise DomainError("k must be at least 2")
    if x < 0:
        raise DomainError("x must be nonnegative")
    return arith.iroot(x, 2 ** (k - 1))


def _weighted(hist, weight) -> int:
    total = 0
    for w1, w3, count in arith.histogram_terms(hist):
        total += count * weight(w1, w3)
    return total


def sum_A(M: int, x: int, threads=None) -> int:
    """sum of M^omega(n) over odd squarefree n <= x."""
    if M < 1:
        raise DomainError("M must be >= 1")
    hist = arith.odd_squarefree_histograms([x], threads=threads)[x]
    return _weighted(hist, lambda w1, w3: M ** (w1 + w3))


def sum_A_bivariate(M: int, N: int, x: int, threads=None) -> int:
    """sum of M^omega1(n) * N^omega3(n) over odd squarefree n <= x."""
    if M < 1 or N < -1:
        raise DomainError("need M >= 1 and N >= -1")
    hist = arith.odd_squarefree_histograms([x], threads=threads)[x]
    return _weighted(hist, lambda w1, w3: M**w1 * N**w3)


def sum_A_many(pairs, xs, threads=None) -> dict[tuple[int, int, int], int]:
    """A_{M,N}(x) for every (M, N) in ``pairs`` and x in ``xs`` from one sieve pass."""
    hists = arith.odd_squarefree_histograms(xs, threads=threads)
    return {
        (M, N, x): _weighted(hists[x], lambda w1, w3, M=M, N=N: M**w1 * N**w3)
        for (M, N) in pairs
        for x in xs
    }


def _family_sum(fam: CountFamily, hist) -> int:
    if fam.kind.bivariate:
        total = _weighted(hist, lambda w1, w3: eval_point(fam, w3, w1))
    else:
        total = _weighted(hist, lambda w1, w3: eval_point(fam, w1 + w3))
    return total


def _class_bounds(x: int, k: int) -> list[int]:
    B = radical_bound(x, k)
    return [B // d for _, _, d in CLASS_TERMS]


def class_sums(k: int, x: int, totally_real: bool = False, threads=None) -> list[int]:
    """The four class sums whose total is N_k(x) (or N_k^+(x))."""
    return count_N_many(k, [x], totally_real, threads=threads, detail=True)[x]


def count_N(k: int, x: int, totally_real: bool = False, threads=None) -> int:
    """Number of fields of degree 2^k with discriminant <= x."""
    return count_N_many(k, [x], totally_real, threads=threads)[x]


def count_N_many(k: int, xs, totally_real: bool = False, threads=None, detail: bool = False):
    """N_k(x) for several x from a single streaming pass over the radicals."""
    xs = sorted({int(x) for x in xs})
    fams = [derive_family(k, tr if totally_real else gen) for gen, tr, _ in CLASS_TERMS]
    bounds = {x: _class_bounds(x, k) for x in xs}
    hists = arith.odd_squarefree_histograms(
        [b for bs in bounds.values() for b in bs], threads=threads
    )
    cache: dict[tuple[int, int], int] = {}
    out = {}
    for x in xs:
        parts = []
        for i, b in enumerate(bounds[x]):
            if (i, b) not in cache:
                cache[(i, b)] = _family_sum(fams[i], hists[b])
            parts.append(cache[(i, b)])
        out[x] = parts if detail else sum(parts)
    return out


def count_N_via_sum_A(k: int, x: int, totally_real: bool = False) -> Fraction:
    """N_k(x) rewritten as a rational combination of A_M / A_{M,N} values.

    Independent of the histogram evaluation path in :func:`count_N` except
    for the shared sieve; used as a cross-check.
    """
    total = Fraction(0)
    for (gen, tr, d), b in zip(CLASS_TERMS, _class_bounds(x, k)):
        fam = derive_family(k, tr if totally_real else gen)
        poly = fam.poly
        for bases, coef in poly.terms:
            if fam.kind.bivariate:
                b3, b1 = bases
                total += coef * Fraction(b3) ** poly.offsets[0] * sum_A_bivariate(b1, b3, b)
            else:
                (base,) = bases
                total += coef * Fraction(base) ** poly.offsets[0] * sum_A(base, b)
        if b >= 1 and fam.zero_override:
            # replace the P = 1 term of the polynomial by the true count
            zero = (0, 0) if fam.kind.bivariate else (0,)
            total += fam.zero_value - poly.evaluate(*zero)
    if total.denominator != 1:
        raise InternalError(f"non-integral total {total}")
    return total
