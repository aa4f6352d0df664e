"""Closed-form field counts as exact exponential polynomials.

Every count of fields with a fixed radical P is a rational combination of
terms b^(omega(P) - 1), or, for the totally real mod-4 classes, of
b3^(omega3 - 1) * b1^omega1 with b3 = -1 allowed. The coefficients are not
tabulated anywhere; :func:`derive_family` solves for them exactly from
combinatorial counts of normal presentations and checks the fit on an
overdetermined grid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .arith import SquarefreeProfile
from .errors import (
    BasisMismatchError,
    DomainError,
    EqualBasesError,
    InternalError,
    SingularSystemError,
)

MAX_K = 6

_VAR_TEXT = {"omega": "ω", "omega1": "ω₁", "omega3": "ω₃"}


def _minus(s: str) -> str:
    return s.replace("-", "−")


@dataclass(frozen=True)
class ExpPoly:
    """sum over terms of coef * prod_i base_i ** (variables_i + offsets_i)."""

    variables: tuple[str, ...]
    offsets: tuple[int, ...]
    terms: tuple[tuple[tuple[int, ...], Fraction], ...] = field(default=())

    @classmethod
    def build(cls, variables, offsets, mapping) -> "ExpPoly":
        items = [(tuple(b), Fraction(c)) for b, c in mapping.items() if c != 0]
        items.sort(key=lambda t: t[0], reverse=True)
        return cls(tuple(variables), tuple(offsets), tuple(items))

    def as_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def coefficient(self, bases) -> Fraction:
        return self.as_dict().get(tuple(bases), Fraction(0))

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        return self.terms[0]

    def evaluate(self, *values: int) -> Fraction:
        if len(values) != len(self.variables):
            raise ValueError(f"expected {len(self.variables)} values, got {len(values)}")
        total = Fraction(0)
        for bases, coef in self.terms:
            term = coef
            for b, v, o in zip(bases, values, self.offsets):
                term *= Fraction(b) ** (v + o)
            total += term
        return total

    def with_offsets(self, offsets) -> "ExpPoly":
        """Same function, re-expressed with different exponent offsets."""
        offsets = tuple(offsets)
        out = {}
        for bases, coef in self.terms:
            for b, old, new in zip(bases, self.offsets, offsets):
                coef *= Fraction(b) ** (old - new)
            out[bases] = coef
        return ExpPoly.build(self.variables, offsets, out)

    def shift(self, delta: int) -> "ExpPoly":
        """The function v -> f(v + delta) for a univariate f."""
        if len(self.variables) != 1:
            raise ValueError("shift is defined for univariate polynomials")
        return ExpPoly(self.variables, (self.offsets[0] + delta,), self.terms)

    def split(self, extra: int = 0) -> "ExpPoly":
        """Univariate f(omega) as a bivariate function of (omega3, omega1)
        with omega = omega3 + omega1 + extra, offsets (-1, 0)."""
        if len(self.variables) != 1:
            raise ValueError("split is defined for univariate polynomials")
        (off,) = self.offsets
        out = {}
        for (b,), coef in self.terms:
            out[(b, b)] = out.get((b, b), 0) + coef * Fraction(b) ** (off + extra + 1)
        return ExpPoly.build(("omega3", "omega1"), (-1, 0), out)

    def _binary(self, other, sign):
        if (self.variables, self.offsets) != (other.variables, other.offsets):
            other = other.with_offsets(self.offsets)
            if self.variables != other.variables:
                raise ValueError("variables differ")
        out = self.as_dict()
        for b, c in other.terms:
            out[b] = out.get(b, 0) + sign * c
        return ExpPoly.build(self.variables, self.offsets, out)

    def __add__(self, other):
        return self._binary(other, 1)

    def __sub__(self, other):
        return self._binary(other, -1)

    def __rmul__(self, scalar):
        return ExpPoly.build(self.variables, self.offsets, {b: scalar * c for b, c in self.terms})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for i, (bases, coef) in enumerate(self.terms):
            mag = abs(coef)
            factors = []
            for b, v, o in zip(bases, self.variables, self.offsets):
                exp = _VAR_TEXT.get(v, v) + ("" if o == 0 else f"{o:+d}")
                factors.append(f"({b})^({exp})")
            body = "·".join([str(mag)] + factors)
            if i == 0:
                parts.append(("-" if coef < 0 else "") + body)
            else:
                parts.append(("- " if coef < 0 else "+ ") + body)
        return _minus(" ".join(parts))

    def to_json(self) -> list[dict]:
        out = []
        for bases, coef in self.terms:
            uni = len(bases) == 1
            out.append(
                {
                    "coef_num": str(coef.numerator),
                    "coef_den": str(coef.denominator),
                    "base": str(bases[0]) if uni else [str(b) for b in bases],
                    "var": self.variables[0] if uni else list(self.variables),
                    "offset": str(self.offsets[0]) if uni else [str(o) for o in self.offsets],
                }
            )
        return out


class Kind(str, enum.Enum):
    R = "R"
    Q = "Q"
    R11 = "R(1,1)"
    R31 = "R(3,1)"
    R21 = "R(2,1)"
    R23 = "R(2,3)"
    Q11 = "Q(1,1)"
    Q31 = "Q(3,1)"
    Q21 = "Q(2,1)"
    Q23 = "Q(2,3)"

    @classmethod
    def parse(cls, text: str) -> "Kind":
        t = text.strip().replace(" ", "").replace("^", "").replace("_", "")
        if t in ("R", "Q"):
            return cls(t)
        t = t.replace("(", "").replace(")", "").replace(",", "")
        if len(t) == 3 and t[0] in "RQ":
            return cls(f"{t[0]}({t[1]},{t[2]})")
        raise ValueError(f"unknown count kind {text!r}")

    @property
    def totally_real(self) -> bool:
        return self.value.startswith("R")

    @property
    def mod4(self) -> str | None:
        return self.value[1:] or None

    @property
    def doubled(self) -> bool:
        """True for the classes counted at radical 2P."""
        return self.mod4 in ("(2,1)", "(2,3)")

    @property
    def bivariate(self) -> bool:
        return self.totally_real and self.mod4 is not None


ALL_KINDS = tuple(Kind)


def geometric_pair_sum(a: int, b: int, n: int, i: int) -> Fraction:
    """sum_{j=i+1}^{n} a^(j-i-1) b^(n-j) in closed form."""
    if a == b:
        raise EqualBasesError("closed form needs distinct bases")
    if n < i:
        raise DomainError("need n >= i")
    return Fraction(b ** (n - i) - a ** (n - i), b - a)


def nested_sum_Rk(k: int, n: int) -> int:
    """sum over 1 = i_1 < ... < i_k <= n of prod_j (2^j - 1)^(gap after i_j).

    This counts positive normal presentations with k entries and n primes.
    """
    if k < 0 or n < 0:
        raise DomainError("need k, n >= 0")
    if k == 0:
        return 1 if n == 0 else 0
    if n < k:
        return 0
    # dp[m]: weight of placements with m pivots among the primes seen so far
    dp = [0] * (k + 1)
    dp[1] = 1
    for _ in range(n - 1):
        new = [0] * (k + 1)
        for m in range(1, k + 1):
            if dp[m]:
                new[m] += dp[m] * (2**m - 1)
                if m < k:
                    new[m + 1] += dp[m]
        dp = new
    return dp[k]


def parity_subset_count(a: int, b: int, all_even: bool) -> Fraction:
    """Ways to pick a nonempty subset of a b-set a times with prescribed
    selection parities: the all-even vector, or any fixed other vector."""
    if a < 0 or b < 1:
        raise DomainError("need a >= 0 and b >= 1")
    m = 2**b - 1
    sign = (-1) ** a
    if all_even:
        return Fraction(m**a + m * sign, 2**b)
    return Fraction(m**a - sign, 2**b)


def _tail_counts(k: int, start: dict[int, int], steps: int) -> int:
    # free primes after all parity constraints: pivot or any nonempty subset
    dp = [0] * (k + 1)
    for m, w in start.items():
        dp[m] += w
    for _ in range(steps):
        new = [0] * (k + 1)
        for m in range(1, k + 1):
            if dp[m]:
                new[m] += dp[m] * (2**m - 1)
                if m < k:
                    new[m + 1] += dp[m]
        dp = new
    return dp[k]


def mod4_split_count(k: int, omega1: int, omega3: int, with_two: bool) -> int:
    """Positive normal presentations whose constrained entries are all 1 mod 4.

    Primes are ordered: 2 (if ``with_two``), then the omega3 primes = 3 mod 4,
    then the omega1 primes = 1 mod 4. Without 2 every entry is constrained;
    with 2 the entry holding 2 is free and the others must be 1 mod 4.

    A constrained entry is 1 mod 4 iff it holds an even number of primes
    = 3 mod 4. With l pivots placed by the end of the 3 mod 4 block and the
    last at position i_l, all parities are decided in the stretch after i_l;
    entry a_l needs an odd number there, so the target vector is nonzero and
    the stretch contributes parity_subset_count(len, l, all_even=False).
    """
    lead = 1 if with_two else 0
    block = lead + omega3
    n = block + omega1
    if n < k:
        return 0
    if omega3 == 0:
        return nested_sum_Rk(k, n)
    # pre[l][i]: pivots 1..l placed, the l-th at position i (1-based), i <= block
    pre = [[0] * (block + 1) for _ in range(k + 1)]
    pre[1][1] = 1
    for l in range(2, k + 1):
        for i in range(l, block + 1):
            pre[l][i] = sum(
                pre[l - 1][ip] * (2 ** (l - 1) - 1) ** (i - ip - 1) for ip in range(l - 1, i)
            )
    after_block: dict[int, int] = {}
    for l in range(1, k + 1):
        for i in range(l, block + 1):
            w = pre[l][i]
            if not w:
                continue
            s = block - i
            if with_two and l == 1:
                # 3 mod 4 primes can only join the free entry a_1
                ways = 1
            elif with_two:
                ways = 2 * parity_subset_count(s, l, all_even=False)
            else:
                ways = parity_subset_count(s, l, all_even=False)
            if ways:
                after_block[l] = after_block.get(l, 0) + w * int(ways)
    return _tail_counts(k, after_block, omega1)


def combinatorial_count(k: int, kind: Kind, omega1: int, omega3: int, omega: int | None = None) -> int:
    """Count for the given kind straight from presentation combinatorics.

    For univariate kinds ``omega`` is omega(P) (odd part for the 2P classes);
    bivariate kinds use (omega1, omega3) of the odd part.
    """
    if omega is None:
        omega = omega1 + omega3

    def R(kk, w):
        return nested_sum_Rk(kk, w)

    def Q(w):
        return 2**k * R(k, w) + (R(k - 1, w) if k >= 1 else 0)

    if kind is Kind.R:
        return R(k, omega)
    if kind is Kind.Q:
        return Q(omega)
    if kind is Kind.Q11:
        return R(k, omega)
    if kind is Kind.Q31:
        return Q(omega) - R(k, omega)
    if kind is Kind.Q21:
        return 2 * R(k, omega + 1)
    if kind is Kind.Q23:
        return Q(omega + 1) - 2 * R(k, omega + 1)
    if kind is Kind.R11:
        return mod4_split_count(k, omega1, omega3, with_two=False)
    if kind is Kind.R31:
        return R(k, omega1 + omega3) - mod4_split_count(k, omega1, omega3, with_two=False)
    if kind is Kind.R21:
        return mod4_split_count(k, omega1, omega3, with_two=True)
    if kind is Kind.R23:
        return R(k, omega1 + omega3 + 1) - mod4_split_count(k, omega1, omega3, with_two=True)
    raise ValueError(kind)


def univariate_bases(k: int) -> list[tuple[int, ...]]:
    return [(2**j - 1,) for j in range(1, k + 1)]


def bivariate_bases(k: int) -> list[tuple[int, ...]]:
    """(b3, b1) = (2^j3 - 1, 2^j1 - 1) with j3 <= j1, plus (-1, 2^j1 - 1)."""
    out = [(2**j3 - 1, 2**j1 - 1) for j1 in range(1, k + 1) for j3 in range(1, j1 + 1)]
    out += [(-1, 2**j1 - 1) for j1 in range(1, k + 1)]
    return out


def solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Exact solution of an overdetermined consistent system by row reduction."""
    ncol = len(rows[0])
    aug = [list(r) + [Fraction(v)] for r, v in zip(rows, rhs)]
    piv_row = 0
    for col in range(ncol):
        pivot = next((r for r in range(piv_row, len(aug)) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularSystemError(f"basis column {col} is not determined by the sample grid")
        aug[piv_row], aug[pivot] = aug[pivot], aug[piv_row]
        lead = aug[piv_row][col]
        aug[piv_row] = [v / lead for v in aug[piv_row]]
        for r in range(len(aug)):
            if r != piv_row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[piv_row])]
        piv_row += 1
    for r in range(piv_row, len(aug)):
        if aug[r][ncol] != 0:
            raise BasisMismatchError("sampled counts are not in the span of the assumed basis")
    return [aug[i][ncol] for i in range(ncol)]


@dataclass(frozen=True)
class CountFamily:
    k: int
    kind: Kind
    poly: ExpPoly
    # exact count at the empty radical (P = 1, or radical 2 for the 2P classes)
    zero_value: int
    zero_override: bool

    def __str__(self):
        return str(self.poly)


def _sample_points(k: int, kind: Kind) -> list[tuple[int, ...]]:
    if kind.bivariate:
        pts = [(w3, w1) for w3 in range(0, k + 3) for w1 in range(0, k + 2)]
        if not kind.doubled:
            pts.remove((0, 0))
        return pts
    first = 0 if kind.doubled else 1
    return [(w,) for w in range(first, first + k + 3)]


def _count_at(k: int, kind: Kind, point: tuple[int, ...]) -> int:
    if kind.bivariate:
        w3, w1 = point
        return combinatorial_count(k, kind, w1, w3)
    (w,) = point
    return combinatorial_count(k, kind, 0, 0, omega=w)


@lru_cache(maxsize=None)
def derive_family(k: int, kind: Kind | str) -> CountFamily:
    """Exact exponential polynomial for a count family, all coefficients solved."""
    kind = Kind.parse(kind) if isinstance(kind, str) else kind
    if not 1 <= k <= MAX_K:
        raise DomainError(f"k must be in 1..{MAX_K}")
    if kind.mod4 is not None and k < 2:
        raise DomainError("mod-4 classes need k >= 2")
    if kind.bivariate:
        variables, offsets = ("omega3", "omega1"), (-1, 0)
        bases = bivariate_bases(k)
    else:
        variables = ("omega",)
        offsets = (0,) if kind.doubled else (-1,)
        bases = univariate_bases(k)
    points = _sample_points(k, kind)
    rows, rhs = [], []
    for pt in points:
        rows.append(
            [
                _power_product(b, pt, offsets)
                for b in bases
            ]
        )
        rhs.append(Fraction(_count_at(k, kind, pt)))
    coefs = solve_exact(rows, rhs)
    poly = ExpPoly.build(variables, offsets, dict(zip(bases, coefs)))
    zero_pt = (0, 0) if kind.bivariate else (0,)
    zero_value = _count_at(k, kind, zero_pt)
    override = poly.evaluate(*zero_pt) != zero_value
    return CountFamily(k, kind, poly, zero_value, override)


def _power_product(bases, point, offsets) -> Fraction:
    out = Fraction(1)
    for b, v, o in zip(bases, point, offsets):
        out *= Fraction(b) ** (v + o)
    return out


def eval_point(fam: CountFamily, *point: int) -> int:
    """Count at (omega,) or (omega3, omega1) with the empty-radical case fixed."""
    if all(v == 0 for v in point) and fam.zero_override:
        return fam.zero_value
    val = fam.poly.evaluate(*point)
    if val.denominator != 1 or val < 0:
        raise InternalError(f"{fam.kind.value}_{fam.k} evaluates to {val} at {point}")
    return int(val)


def eval_count(fam: CountFamily, prof: SquarefreeProfile) -> int:
    """Number of fields of the family's kind with radical P (or 2P)."""
    if not prof.is_squarefree:
        raise DomainError(f"{prof.n} is not squarefree")
    if fam.kind.mod4 is not None and not prof.is_odd:
        raise DomainError(f"{fam.kind.value} takes an odd P, got {prof.n}")
    if fam.kind.bivariate:
        return eval_point(fam, prof.omega3, prof.omega1)
    return eval_point(fam, prof.omega)


def leading_coefficient_expected(k: int, kind: Kind) -> tuple[tuple[int, ...], Fraction]:
    """Leading term as stated for each family, in this module's offsets."""
    F = F_k(k)
    top = 2**k - 1
    two_k = Fraction(2**k)
    table = {
        Kind.R: F,
        Kind.Q: two_k * F,
        Kind.Q11: F,
        Kind.Q31: top * F,
        # (2^k - 1)^omega(P) rewritten with offset 0
        Kind.Q21: 2 * F,
        Kind.Q23: (2**k - 2) * F,
        Kind.R11: F / two_k,
        Kind.R31: top * F / two_k,
        # (2^k - 1)^omega(P) = (2^k - 1) * top^(omega3 - 1) * top^omega1
        Kind.R21: top * F / 2 ** (k - 1),
        Kind.R23: top * (2 ** (k - 1) - 1) * F / 2 ** (k - 1),
    }
    bases = (top, top) if kind.bivariate else (top,)
    return bases, table[kind]


def F_k(k: int) -> Fraction:
    out = Fraction(1)
    for j in range(1, k):
        out /= 2**k - 2**j
    return out


def all_families(ks=range(2, 6)):
    return {(k, kind): derive_family(k, kind) for k, kind in product(ks, ALL_KINDS)}
