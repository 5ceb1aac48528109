from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellbound.errors import NegativeInput, ZeroArgument
from ellbound.exactnum import QQ, NumberField
from ellbound.heights import (ProjectivePoint, height_breakdown, height_via_mahler, height_x, log_plus,
                              mahler_measure, radical, weil_height, weil_height_with_error)
from oracles.arith_oracle import radical_oracle

Qr2 = NumberField((-2, 0, 1))
Qi = NumberField((1, 0, 1))
GOLDEN = NumberField((-1, -1, 1))


def test_log_plus():
    assert log_plus(0) == 1
    assert log_plus(0.5) == 1
    assert log_plus(math.e ** 3) == pytest.approx(3)
    with pytest.raises(NegativeInput):
        log_plus(-1)


def test_weil_height_examples():
    assert weil_height((4, 6)) == pytest.approx(math.log(3), abs=1e-15)
    assert weil_height((1, 1)) == 0
    assert weil_height(ProjectivePoint((Qr2(1), Qr2.gen))) == pytest.approx(0.5 * math.log(2), abs=1e-9)
    value, err = weil_height_with_error((4, 6))
    assert err == 0


def test_height_witnesses():
    b = height_breakdown((4, 6))
    assert b["witnesses"]["coprime_representative"] == [2, 3]
    b = height_breakdown(ProjectivePoint((Qi(1), (1 + Qi.gen) * Fraction(1, 2))))
    assert b["witnesses"]["finite"] and b["witnesses"]["degree"] == 2


def test_mahler_examples():
    assert height_via_mahler(QQ(2)) == pytest.approx(math.log(2))
    assert height_via_mahler(QQ(Fraction(1, 3))) == pytest.approx(math.log(3))
    # M(t^2 - t - 1) is the golden ratio; the absolute height divides log M by the degree
    m, err = mahler_measure((-1, -1, 1))
    assert m == pytest.approx(math.log((1 + 5 ** 0.5) / 2), abs=1e-12)
    assert height_via_mahler(GOLDEN.gen) == pytest.approx(0.5 * math.log((1 + 5 ** 0.5) / 2), abs=1e-9)


def test_zero_point():
    with pytest.raises(ZeroArgument):
        ProjectivePoint((0, 0))


def test_radical_examples():
    rad, S = radical((1, 8, 9))
    assert S.primes == [2, 3] and rad == pytest.approx(math.log(6))
    rad, S = radical((1, 1, 2))
    assert S.primes == [2] and rad == pytest.approx(math.log(2))
    rad, S = radical((1, 2, 3))
    assert S.primes == [2, 3]
    with pytest.raises(ZeroArgument):
        radical((1, 0, 1))


def test_radical_over_gaussian_field():
    # (1 : 2+i : 3+i): 2+i and 3+i = (1+i)(2-i) pick out one place above 5 each, plus the place above 2
    i = Qi.gen
    rad, S = radical(ProjectivePoint((Qi(1), 2 + i, 3 + i)))
    assert sorted(v.p for v in S) == [2, 5, 5]
    assert rad == pytest.approx(math.log(2) + 2 * math.log(5))


def test_h_abc_bounded_by_h_ac():
    for a, b in [(1, 8), (3, 5), (1, 1), (5, 27), (1, 2400)]:
        c = a + b
        assert weil_height((a, b, c)) <= weil_height((a, c)) + math.log(2) + 1e-12


ints = st.integers(-10 ** 6, 10 ** 6).filter(lambda n: n != 0)


@given(ints, ints, ints, st.fractions(min_value=-1000, max_value=1000, max_denominator=1000))
def test_height_projective_invariance(a, b, c, lam):
    if lam == 0:
        return
    P = ProjectivePoint((a, b, c))
    assert weil_height(P.scale(lam)) == pytest.approx(weil_height(P), abs=1e-12)


@given(ints, ints, st.fractions(min_value=-100, max_value=100, max_denominator=100))
def test_radical_scaling_invariance(a, b, lam):
    if lam == 0 or a + b == 0:
        return
    P = ProjectivePoint((a, b, a + b))
    r1, S1 = radical(P)
    r2, S2 = radical(P.scale(lam))
    assert S1.primes == S2.primes and r1 == r2


def test_radical_matches_brute_force():
    rng = random.Random(7)
    for _ in range(200):
        a, b = rng.randint(1, 10 ** 5), rng.randint(1, 10 ** 5)
        S, sig = radical_oracle(a, b, a + b)
        rad, PS = radical((a, b, a + b))
        assert PS.primes == S and rad == pytest.approx(sig, abs=1e-12)


def test_weil_height_matches_mahler_on_sample():
    rng = random.Random(11)
    fields = [NumberField(m) for m in [(1, 0, 1), (-2, 0, 1), (-2, 0, 0, 1), (1, 1, 0, 0, 1), (-1, -1, 1)]]
    for _ in range(20):
        K = rng.choice(fields)
        a = K([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(K.degree)])
        if a.is_zero():
            continue
        assert weil_height(ProjectivePoint((K(1), a))) == pytest.approx(height_via_mahler(a), abs=1e-6)


def test_height_x():
    assert height_x(QQ(Fraction(129, 100))) == pytest.approx(math.log(129))
