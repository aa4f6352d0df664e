import itertools
import math

import pytest

from multiquad.countform import nested_sum_Rk
from multiquad.errors import BudgetError, DomainError
from multiquad.fields import FieldKey, Mod4Class, discriminant
from multiquad.oracle import (
    FieldFilter,
    count_upto,
    dump_rows,
    enumerate_by_discriminant,
    enumerate_by_radical,
    normal_patterns,
    radical_candidates,
)

PRIMES = (3, 5, 7, 13, 17, 29)


def radicals(max_omega=4, with_two=True):
    for w in range(0, max_omega + 1):
        for combo in itertools.combinations(PRIMES, w):
            P = math.prod(combo)
            yield P
            if with_two:
                yield 2 * P


FILTERS = [
    FieldFilter(),
    FieldFilter(totally_real_only=True),
    FieldFilter(i_free_only=True),
    FieldFilter(mod4_class=Mod4Class.C31),
    FieldFilter(totally_real_only=True, mod4_class=Mod4Class.C11),
    FieldFilter(mod4_class=Mod4Class.C23),
]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_two_routes_agree(k):
    for P in radicals(3 if k == 1 else 4):
        for filt in FILTERS:
            if filt.mod4_class is not None and k < 2:
                continue
            a = enumerate_by_radical(P, k, filt, method="normal")
            b = enumerate_by_radical(P, k, filt, method="subgroup")
            assert a == b, (P, k, filt)


def test_radicals_are_exact():
    for P in radicals(4):
        for key in enumerate_by_radical(P, 2):
            assert key.radical == P


def test_quadratic_fields():
    assert enumerate_by_radical(15, 1) == {FieldKey((-15,)), FieldKey((15,))}
    assert enumerate_by_radical(1, 1) == {FieldKey((-1,))}


def test_normal_patterns_count():
    pats = list(normal_patterns([3, 5, 7], 2))
    assert len(pats) == len(set(pats)) == nested_sum_Rk(2, 3)
    assert (15, 7) in pats and (3, 5) not in pats


def test_filter_parse_roundtrip():
    for text in ["none", "tr", "ifree", "(1,1)", "tr+(3,1)", "ifree+(2,3)"]:
        f = FieldFilter.parse(text)
        assert FieldFilter.parse(str(f)) == f


def test_small_discriminant_list():
    fields = enumerate_by_discriminant(400, 2)
    assert [D for D, _ in fields] == [144, 225, 256, 400]
    assert dump_rows(fields[:1]) == [{"D": "144", "key": "-3,-1,3"}]
    assert count_upto(fields, 143) == 0 and count_upto(fields, 256) == 3


def test_totally_real_first_field():
    fields = enumerate_by_discriminant(1600, 2, FieldFilter(totally_real_only=True))
    assert [(D, str(k)) for D, k in fields] == [(1600, "2,5,10")]


def test_discriminants_sorted_and_bounded():
    fields = enumerate_by_discriminant(10**6, 2)
    ds = [D for D, _ in fields]
    assert ds == sorted(ds) and ds[-1] <= 10**6
    assert all(discriminant(k) == D for D, k in fields)


def test_radical_candidates():
    assert radical_candidates(144, 2) == [1, 2, 3, 5, 7, 11]
    with pytest.raises(DomainError):
        radical_candidates(100, 1)
    with pytest.raises(BudgetError):
        radical_candidates(10**13, 2)


def test_non_squarefree_radical():
    with pytest.raises(DomainError):
        enumerate_by_radical(12, 2)
