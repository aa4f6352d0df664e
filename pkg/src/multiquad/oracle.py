"""Brute-force enumeration of multi-quadratic fields.

Two independent routes list the fields with a given radical:

* ``"normal"`` walks the divisibility patterns of normal presentations, adds
  sign choices, and adjoins sqrt(-1) to totally real fields of one rank lower;
* ``"subgroup"`` lists every rank-k subspace of GF(2)^(1+omega) (coordinates
  -1, p_1, ..., p_n) in reduced row echelon form and keeps those whose
  support is all of P.

Fields are deduplicated by :class:`FieldKey`, never by presentation.
"""

from __future__ import annotations

import bisect
import itertools
from dataclasses import dataclass

from . import arith
from .errors import BudgetError, DomainError, OutOfRangeError
from .fields import FieldKey, Mod4Class, discriminant, mod4_class

SUBGROUP_OMEGA_BUDGET = 12
NORMAL_OMEGA_BUDGET = 16
RADICAL_BUDGET = 10**6


@dataclass(frozen=True)
class FieldFilter:
    i_free_only: bool = False
    totally_real_only: bool = False
    mod4_class: Mod4Class | None = None

    def accepts(self, key: FieldKey) -> bool:
        if self.totally_real_only and not key.is_totally_real:
            return False
        if self.i_free_only and -1 in key.elements:
            return False
        if self.mod4_class is not None and mod4_class(key) != self.mod4_class:
            return False
        return True

    @classmethod
    def parse(cls, text: str | None) -> "FieldFilter":
        """Parse ``"tr"``, ``"ifree"``, ``"(1,1)"`` or combinations joined by ``+``."""
        if not text or text in ("none", "all"):
            return cls()
        i_free = tr = False
        cls4 = None
        for part in text.split("+"):
            part = part.strip().lower()
            if part in ("tr", "totally_real", "totally-real", "real"):
                tr = True
            elif part in ("ifree", "i_free", "i-free"):
                i_free = True
            else:
                cls4 = Mod4Class.parse(part)
        return cls(i_free, tr, cls4)

    def __str__(self):
        parts = []
        if self.totally_real_only:
            parts.append("tr")
        if self.i_free_only:
            parts.append("ifree")
        if self.mod4_class is not None:
            parts.append(self.mod4_class.value)
        return "+".join(parts) or "none"


def _check_radical(P: int, k: int, filt: FieldFilter) -> list[int]:
    if P < 1:
        raise OutOfRangeError("radical must be a positive integer")
    if k < 1:
        raise DomainError("k must be at least 1")
    if filt.mod4_class is not None and k < 2:
        raise DomainError("mod-4 class filters need k >= 2")
    f = arith.factorize(P)
    if any(e > 1 for e in f.values()):
        raise DomainError(f"{P} is not squarefree")
    return sorted(f)


def normal_patterns(primes: list[int], k: int):
    """Positive normal presentations with radical prod(primes), ascending prime order."""
    n = len(primes)
    if n < k or k < 1:
        return
    entries = [1] * k

    def walk(idx, m):
        if idx == n:
            if m == k:
                yield tuple(entries)
            return
        # remaining primes must still supply the missing pivots
        if n - idx < k - m:
            return
        q = primes[idx]
        if m < k:
            entries[m] *= q
            yield from walk(idx + 1, m + 1)
            entries[m] //= q
        if m >= 1:
            for mask in range(1, 1 << m):
                for j in range(m):
                    if mask >> j & 1:
                        entries[j] *= q
                yield from walk(idx + 1, m)
                for j in range(m):
                    if mask >> j & 1:
                        entries[j] //= q

    yield from walk(0, 0)


def _by_normal_presentations(primes, k, filt):
    out = set()
    tr_only = filt.totally_real_only
    for entries in normal_patterns(primes, k):
        signs = [(1,) * k] if tr_only else itertools.product((1, -1), repeat=k)
        for sg in signs:
            key = FieldKey.from_generators([s * a for s, a in zip(sg, entries)])
            if filt.accepts(key):
                out.add(key)
    if not tr_only and not filt.i_free_only:
        if k == 1:
            lower = [()] if not primes else []
        else:
            lower = normal_patterns(primes, k - 1)
        for entries in lower:
            key = FieldKey.from_generators([-1, *entries])
            if filt.accepts(key):
                out.add(key)
    return out


def _by_subgroups(primes, k, filt):
    d = len(primes) + 1
    if k > d:
        return set()
    # bit 0 is -1, bit i is primes[i-1]
    values = [1] * (1 << d)
    for mask in range(1, 1 << d):
        low = mask & -mask
        i = low.bit_length() - 1
        values[mask] = values[mask ^ low] * (-1 if i == 0 else primes[i - 1])
    full_support = (1 << d) - 2
    out = set()
    for pivots in itertools.combinations(range(d), k):
        pivot_set = set(pivots)
        free = [[c for c in range(p + 1, d) if c not in pivot_set] for p in pivots]
        n_free = [len(f) for f in free]
        for bits in itertools.product(*(range(1 << nf) for nf in n_free)):
            rows = []
            for p, cols, b in zip(pivots, free, bits):
                row = 1 << p
                for t, c in enumerate(cols):
                    if b >> t & 1:
                        row |= 1 << c
                rows.append(row)
            elems = [0]
            for row in rows:
                elems += [e ^ row for e in elems]
            support = 0
            for e in elems:
                support |= e
            if support & full_support != full_support:
                continue
            key = FieldKey(tuple(sorted(values[e] for e in elems[1:])))
            if filt.accepts(key):
                out.add(key)
    return out


def enumerate_by_radical(P: int, k: int, filt: FieldFilter | None = None, method: str = "normal") -> set[FieldKey]:
    """All fields of degree 2^k whose radical is exactly P, matching the filter."""
    filt = filt or FieldFilter()
    primes = _check_radical(P, k, filt)
    if method == "subgroup":
        if len(primes) > SUBGROUP_OMEGA_BUDGET:
            raise BudgetError(f"omega(P) = {len(primes)} exceeds subgroup budget {SUBGROUP_OMEGA_BUDGET}")
        return _by_subgroups(primes, k, filt)
    if method == "normal":
        if len(primes) > NORMAL_OMEGA_BUDGET:
            raise BudgetError(f"omega(P) = {len(primes)} exceeds enumeration budget {NORMAL_OMEGA_BUDGET}")
        return _by_normal_presentations(primes, k, filt)
    raise ValueError(f"unknown method {method!r}")


def radical_candidates(x: int, k: int) -> list[int]:
    """Squarefree radicals R that can carry a field of degree 2^k with D <= x."""
    if k < 2:
        raise DomainError("discriminant enumeration needs k >= 2")
    bound = arith.iroot(x, 2 ** (k - 1))
    if bound > RADICAL_BUDGET:
        raise BudgetError(f"radical bound {bound} exceeds enumeration budget {RADICAL_BUDGET}")
    if bound < 1:
        return []
    sieve = arith.build_sieve(1, bound + 1)
    out = []
    for R in range(1, bound + 1):
        if not sieve.squarefree[R - 1]:
            continue
        # an even radical forces 2^r with r >= 2
        if R % 2 == 0 and 4 * R > bound:
            continue
        out.append(R)
    return out


def enumerate_by_discriminant(x: int, k: int, filt: FieldFilter | None = None, method: str = "normal") -> list[tuple[int, FieldKey]]:
    """All fields with D(K) <= x, sorted by (D, key)."""
    filt = filt or FieldFilter()
    out = []
    for R in radical_candidates(x, k):
        for key in enumerate_by_radical(R, k, filt, method):
            D = discriminant(key)
            if D <= x:
                out.append((D, key))
    out.sort(key=lambda t: (t[0], t[1].elements))
    return out


def dump_rows(fields) -> list[dict[str, str]]:
    """CSV-facing rows ``D,key`` for a list of (D, key)."""
    return [{"D": str(D), "key": str(key)} for D, key in fields]


def count_upto(fields, x: int) -> int:
    """Number of entries of a sorted (D, key) list with D <= x."""
    return bisect.bisect_right([D for D, _ in fields], x)
