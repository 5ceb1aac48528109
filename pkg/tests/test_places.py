from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellbound.errors import DomainError, IndeterminateSplitting
from ellbound.exactnum import QQ, NumberField
from ellbound.places import (PlaceSet, dedekind_hensel_bound, lift_places, ord_at, sigma_S, split_prime,
                             worst_case_place)

Qi = NumberField((1, 0, 1))
i = Qi.gen


def ef(K, p):
    return sorted((v.e, v.f) for v in split_prime(K, p))


def test_splitting_in_gaussian_field():
    assert ef(Qi, 5) == [(1, 1), (1, 1)]
    assert ef(Qi, 3) == [(1, 2)]
    assert ef(Qi, 2) == [(2, 1)]
    assert ef(QQ, 7) == [(1, 1)]


def test_split_prime_rejects_composites():
    with pytest.raises(DomainError):
        split_prime(Qi, 15)


def test_fundamental_identity_cubic():
    K = NumberField((-2, 0, 0, 1))
    for p in (2, 3, 5, 7, 11, 13, 31):
        assert sum(e * f for e, f in ef(K, p)) == 3


def test_index_divisor_needs_other_generator():
    # Z[sqrt(-3)] has index 2 in the maximal order; 2 is inert in Q(sqrt(-3))
    K = NumberField((3, 0, 1))
    assert ef(K, 2) == [(1, 2)]


def test_common_index_divisor_is_reported():
    # 2 splits completely in this cubic field (x^3 - x^2 - 10x + 8); no generator is 2-monogenic
    K = NumberField((8, -10, -1, 1))
    with pytest.raises(IndeterminateSplitting):
        split_prime(K, 2)
    w = worst_case_place(K, 2)
    assert (w.e, w.f, w.certified) == (1, 3, False)


def test_valuations():
    v2 = split_prime(QQ, 2)[0]
    assert ord_at(QQ(8), v2) == 3
    assert ord_at(1 + i, split_prime(Qi, 2)[0]) == 1
    assert all(ord_at(Qi(5), v) == 1 for v in split_prime(Qi, 5))
    v5a, v5b = split_prime(Qi, 5)
    assert sorted([ord_at(2 + i, v5a), ord_at(2 + i, v5b)]) == [0, 1]


def test_sigma_S():
    assert sigma_S(PlaceSet.from_primes(QQ, [2, 3])) == pytest.approx(math.log(6), abs=1e-12)
    assert sigma_S(PlaceSet.from_primes(QQ, [])) == 0
    assert sigma_S(PlaceSet.from_primes(Qi, [5])) == pytest.approx(2 * math.log(5), abs=1e-12)


def test_lift_places():
    S2 = lift_places(PlaceSet.from_primes(QQ, [2]), Qi)
    assert len(S2) == 1 and sigma_S(S2) == pytest.approx(math.log(2))
    assert len(lift_places(PlaceSet.from_primes(QQ, []), Qi)) == 0
    S5 = lift_places(PlaceSet.from_primes(QQ, [5]), Qi)
    assert len(S5) == 2 and sigma_S(S5) == pytest.approx(2 * math.log(5))


def test_dedekind_hensel():
    assert dedekind_hensel_bound(0, 1, 0) == pytest.approx(1.26)
    assert dedekind_hensel_bound(math.log(2), 2, 0) == pytest.approx(math.log(2) + 2.52)
    assert dedekind_hensel_bound(1.7918, 4, math.log(4)) == pytest.approx(1.7918 + 4 * (math.log(4) + 1.26))
    with pytest.raises(DomainError):
        dedekind_hensel_bound(0, 0, 0)


FIELDS = [NumberField(m) for m in [(1, 0, 1), (-2, 0, 1), (-2, 0, 0, 1), (1, 1, 1), (-1, -1, 0, 1), (5, 0, 0, 0, 1)]]
PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


@given(st.sampled_from(FIELDS), st.sampled_from(PRIMES))
def test_sum_ef_equals_degree(K, p):
    try:
        places = split_prime(K, p)
    except IndeterminateSplitting:
        return
    assert sum(v.e * v.f for v in places) == K.degree


@given(st.sampled_from(FIELDS), st.sampled_from(PRIMES), st.lists(st.integers(-30, 30), min_size=4, max_size=4),
       st.lists(st.integers(-30, 30), min_size=4, max_size=4))
def test_ord_is_additive(K, p, ca, cb):
    a, b = K(ca[:K.degree]), K(cb[:K.degree])
    if a.is_zero() or b.is_zero():
        return
    try:
        places = split_prime(K, p)
    except IndeterminateSplitting:
        return
    for v in places:
        assert ord_at(a * b, v) == ord_at(a, v) + ord_at(b, v)


@given(st.sampled_from(FIELDS), st.sampled_from(PRIMES), st.lists(st.integers(-30, 30), min_size=4, max_size=4))
def test_product_formula_at_p(K, p, ca):
    # sum_v f_v ord_v(a) = v_p(N(a))
    a = K(ca[:K.degree])
    if a.is_zero():
        return
    try:
        places = split_prime(K, p)
    except IndeterminateSplitting:
        return
    N = a.norm()
    vp = 0
    num, den = N.numerator, N.denominator
    while num % p == 0:
        num //= p
        vp += 1
    while den % p == 0:
        den //= p
        vp -= 1
    assert sum(v.f * ord_at(a, v) for v in places) == vp
