"""Presentations of multi-quadratic fields, normal forms, mod-4 classes and discriminants.

A field Q(sqrt(a_1), ..., sqrt(a_k)) is identified by its :class:`FieldKey`,
the set of squarefree parts of all nonempty subset products of the a_i. Under
``(d, e) -> sqf(d*e)`` these form an elementary abelian 2-group, so the key is
the same for every presentation of the field.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .arith import factorize, is_squarefree, sqf_mul
from .errors import DomainError, IndependenceError, InternalError, NotIFreeError


def span(generators) -> set[int]:
    """The subgroup generated by squarefree integers, including 1."""
    group = {1}
    for g in generators:
        group |= {sqf_mul(s, g) for s in group}
    return group


def prime_set(n: int) -> frozenset[int]:
    return frozenset(factorize(n))


@dataclass(frozen=True)
class Presentation:
    entries: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(a) for a in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise IndependenceError("a presentation needs at least one generator")
        for a in entries:
            if a in (0, 1) or not is_squarefree(a):
                raise IndependenceError(f"{a} is not a squarefree integer other than 0, 1")
        if len(span(entries)) != 2 ** len(entries):
            raise IndependenceError(f"{entries} are dependent: degree is below 2^{len(entries)}")

    @property
    def k(self) -> int:
        return len(self.entries)

    @classmethod
    def parse(cls, text: str) -> "Presentation":
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    def __str__(self):
        return ",".join(str(a) for a in self.entries)


@dataclass(frozen=True)
class FieldKey:
    """Sorted nontrivial elements of the quadratic-subfield group."""

    elements: tuple[int, ...]

    @property
    def k(self) -> int:
        return (len(self.elements) + 1).bit_length() - 1

    @property
    def radical(self) -> int:
        primes = set()
        for e in self.elements:
            primes |= prime_set(e)
        return math.prod(primes)

    @property
    def is_totally_real(self) -> bool:
        return self.elements[0] > 0

    @classmethod
    def from_generators(cls, generators) -> "FieldKey":
        group = span(generators)
        group.discard(1)
        return cls(tuple(sorted(group)))

    @classmethod
    def parse(cls, text: str) -> "FieldKey":
        elements = sorted(int(t) for t in text.replace(" ", "").split(",") if t)
        size = len(elements) + 1
        if size & (size - 1) or set(elements) | {1} != span(elements):
            raise IndependenceError(f"{text!r} is not a subgroup key")
        return cls(tuple(elements))

    def __str__(self):
        return ",".join(str(e) for e in self.elements)


class Mod4Class(str, enum.Enum):
    C11 = "(1,1)"
    C31 = "(3,1)"
    C21 = "(2,1)"
    C23 = "(2,3)"

    @property
    def r(self) -> int:
        """Exponent of the extra power of two in the discriminant."""
        return {"(1,1)": 0, "(2,1)": 2, "(3,1)": 2, "(2,3)": 3}[self.value]

    @classmethod
    def parse(cls, text: str) -> "Mod4Class":
        t = text.strip().replace(" ", "")
        if not t.startswith("("):
            t = f"({t})"
        return cls(t)


def field_key(p: Presentation) -> FieldKey:
    key = FieldKey.from_generators(p.entries)
    if len(key.elements) != 2**p.k - 1:
        raise IndependenceError(f"{p} generates a field of degree below 2^{p.k}")
    return key


def is_i_free(p: Presentation | FieldKey) -> bool:
    key = field_key(p) if isinstance(p, Presentation) else p
    return -1 not in key.elements


def _prime_index(entries) -> tuple[list[int], dict[int, int]]:
    primes = sorted(set().union(*(prime_set(a) for a in entries)))
    return primes, {q: i for i, q in enumerate(primes)}


def normalize(p: Presentation) -> Presentation:
    """The unique normal presentation of an i-free field, primes indexed ascending.

    At step m the entry holding the least prime not yet used as a pivot is
    moved to slot m and multiplied onto every other entry (earlier ones
    included) that shares that prime.
    """
    if not is_i_free(p):
        raise NotIFreeError(f"Q(sqrt({p})) contains i; no normal presentation")
    work = [(1 if a > 0 else -1, prime_set(a)) for a in p.entries]
    for m in range(p.k):
        if any(not ps for _, ps in work[m:]):
            raise InternalError("an entry collapsed to a unit during normalization")
        pivot = min(min(ps) for _, ps in work[m:])
        j = next(i for i in range(m, p.k) if pivot in work[i][1])
        work[m], work[j] = work[j], work[m]
        sign_m, primes_m = work[m]
        for i in range(p.k):
            if i != m and pivot in work[i][1]:
                sign_i, primes_i = work[i]
                work[i] = (sign_i * sign_m, primes_i ^ primes_m)
    return Presentation(tuple(s * math.prod(ps) for s, ps in work))


def is_normal(p: Presentation) -> bool:
    primes, index = _prime_index(p.entries)
    pivots = []
    for a in p.entries:
        ps = prime_set(a)
        if not ps:
            return False
        pivots.append(min(index[q] for q in ps))
    if pivots[0] != 0 or any(x >= y for x, y in zip(pivots, pivots[1:])):
        return False
    for j, ij in enumerate(pivots):
        q = primes[ij]
        if any(a % q == 0 for i, a in enumerate(p.entries) if i != j):
            return False
    return True


def _res4(a: int) -> int:
    return a % 4


def mod4_class(key: FieldKey) -> Mod4Class:
    if key.k < 2:
        raise DomainError("mod-4 classes are defined for k >= 2")
    odd = [e for e in key.elements if e % 2]
    all_one = all(_res4(e) == 1 for e in odd)
    if len(odd) == len(key.elements):
        return Mod4Class.C11 if all_one else Mod4Class.C31
    return Mod4Class.C21 if all_one else Mod4Class.C23


_COMPLIANT_PAIRS = {(1, 1), (2, 1), (3, 1), (2, 3)}


def _search_order(elements):
    # by absolute value, positive before negative
    return sorted(elements, key=lambda e: (abs(e), e < 0))


def to_mod4_presentation(key: FieldKey) -> Presentation:
    """First ordered basis of the key with (a1, a2) in one of the four allowed
    residue pairs and a_i = 1 mod 4 for i >= 3."""
    k = key.k
    if k < 2:
        raise DomainError("mod-4 presentations are defined for k >= 2")
    order = _search_order(key.elements)

    def extend(chosen, group):
        m = len(chosen)
        if m == k:
            return chosen
        for e in order:
            if e in group:
                continue
            if m == 1 and (_res4(chosen[0]), _res4(e)) not in _COMPLIANT_PAIRS:
                continue
            if m >= 2 and _res4(e) != 1:
                continue
            found = extend(chosen + [e], group | {sqf_mul(g, e) for g in group})
            if found:
                return found
        return None

    basis = extend([], {1})
    if basis is None:
        raise InternalError(f"no mod-4 compliant basis for key {key}")
    return Presentation(tuple(basis))


def discriminant(key: FieldKey) -> int:
    """D(K) = (2^r rad(a_1...a_k))^(2^(k-1)) read off a compliant presentation."""
    pres = to_mod4_presentation(key)
    a1, a2 = pres.entries[0], pres.entries[1]
    r = Mod4Class("(%d,%d)" % (_res4(a1), _res4(a2))).r
    rad = math.prod(set().union(*(prime_set(a) for a in pres.entries)))
    return (2**r * rad) ** (2 ** (key.k - 1))
