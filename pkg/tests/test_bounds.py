from __future__ import annotations

import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bound_cases import CHAIN_FUNCTIONS, ORACLE_CASES, chain_violations, log_of
from ellbound import bounds as B
from ellbound.errors import DomainError
from ellbound.ledger import ConstantsLedger
from ellbound.tower import TowerReal, compare
from oracles import bounds_oracle as O

ONES = ConstantsLedger.ones()
E = math.e


def test_thm1_example(frozen):
    C = B.thm1_C_EK(1, 2, E, [E], E, ONES)
    assert C.level == 1
    assert C.value == pytest.approx(frozen["thm1_logC_r1_d2_all_e"], rel=1e-12)
    assert C.value == pytest.approx(24 * math.log(2) + 1, rel=1e-12)


def test_thm1_gamma2_homogeneity():
    a = B.thm1_C_EK(1, 3, 10.0, [2.0], 0.1, ONES)
    b = B.thm1_C_EK(1, 3, 10.0, [2.0], 0.1, ONES.with_values(gamma2=2.0))
    assert b.value - a.value == pytest.approx(math.log(2), abs=1e-12)


def test_thm1_large_regulator_floor():
    terms = B.thm1_terms(2, 3, 5.0, [1.0, 1.0], 1e12, ONES)
    assert terms["reg_inv"] == terms["log_reg_inv"] == terms["loglog_reg_inv"] == 0


def test_thm1_full_bound_cases():
    C = B.thm1_C_EK(1, 1, E, [E], E, ONES)
    assert B.thm1_full_bound(C, 0, 1, 3.0, ONES.with_values(gamma0=7.0)) == TowerReal(7.0)
    assert B.thm1_full_bound(C, 1, 1, 0.0, ONES) is C
    assert B.thm1_full_bound(C, 1, 1, 1.0, ONES).value == pytest.approx(C.value + 9)
    with pytest.raises(DomainError):
        B.thm1_C_EK(2, 1, E, [E], E, ONES)


def test_rank_examples(frozen):
    assert B.rank_bound(1, 0, 0) == pytest.approx(frozen["rank_d1"], rel=1e-12)
    assert B.rank_bound(1, 0, 0) == pytest.approx(327.3, abs=0.05)
    assert B.rank_bound(1, 1, 0) - B.rank_bound(1, 0, 0) == pytest.approx(738.66, abs=0.01)
    assert B.rank_bound(1, 1, 0) == pytest.approx(frozen["rank_d1_logN1"], rel=1e-12)
    k1, k2, k3 = B.rank_kappas(2)
    assert k2 == pytest.approx(2 * B.rank_kappas(1)[1])
    assert B.rank_bound(2, 0, 0) == pytest.approx(frozen["rank_d2"], rel=1e-12)


def test_conductor_caps():
    assert B.conductor_exponent_cap(7, 3) == 2
    assert B.conductor_exponent_cap(2, 1) == 8
    assert B.conductor_exponent_cap(3, 2) == 8
    with pytest.raises(DomainError):
        B.conductor_exponent_cap(4, 1)
    with pytest.raises(DomainError):
        B.conductor_exponent_cap(5, 0)


def test_conductor_transfer():
    assert B.conductor_transfer(1, math.log(2)) == pytest.approx(8 * math.log(2))
    assert B.conductor_transfer(3, 0) == 0
    assert B.conductor_transfer(4, 1) == 32


def test_bad_prime_proxy():
    assert B.bad_prime_proxy(0, -2) == [2, 3]
    assert B.bad_prime_proxy(-1, 0) == [2]
    assert B.logN_F0_proxy(-1, 0) == pytest.approx(math.log(2))


def test_lemma38_examples():
    L = ONES.with_values(kappa4=0.5)
    out = B.lemma38_bounds(1, 0.0, 2.0, 1, L)
    assert float(out["logV_bound"]) == pytest.approx(2.0)
    assert float(out["prod_height_bound"]) == pytest.approx(2.0 / 0.5)
    out = B.lemma38_bounds(5, 0.0, 2.0, 1, L)
    assert float(out["prod_height_bound"]) == pytest.approx(125 * math.log(5) ** 2 / 0.5 * 2.0)


def test_prop310_examples(frozen):
    assert B.prop310_exponent_block(1) == pytest.approx(frozen["prop310_block_d1"], rel=1e-12)
    s = 1 + math.sqrt(3)
    assert B.prop310_exponent_block(1) == pytest.approx(s ** 8 / math.log(s), rel=1e-12)
    assert log_of(B.prop310_log_Cd(1)) == pytest.approx(math.log(frozen["prop310_logC_d1"]), rel=1e-12)
    base = log_of(B.prop310_reg_bound(2, 1.0, 1.0, 1.0))
    assert log_of(B.prop310_reg_bound(2, 3.0, 1.0, 1.0)) - base == pytest.approx(3, abs=1e-6 * base)
    assert log_of(B.prop310_reg_bound(2, 1.0, 3.0, 1.0)) - base == pytest.approx(1, abs=1e-6 * base)
    # h below the floor is replaced by e
    assert B.prop310_reg_bound(1, 0, 0, 0.5) == B.prop310_reg_bound(1, 0, 0, E)


def test_prop310_large_degree():
    # log C_8 is about 1.7e16: too big for exp, small enough to stay at level 1
    t = B.prop310_reg_bound(8, 10.0, 10.0, 1.0)
    assert t.level == 1
    assert t.value == pytest.approx(float(O.log_prop310(8, 10.0, 10.0, 1.0)), rel=1e-12)


def test_lemma39_examples():
    out = B.lemma39_bounds(1, 0.0, ONES.with_values(kappa5=3.0))
    assert log_of(out["reg_bound"]) == pytest.approx(3.0)
    a = B.lemma39_bounds(3, 5.0, ONES.with_values(kappa7=1.0))["prod_bound"]
    b = B.lemma39_bounds(3, 5.0, ONES.with_values(kappa7=2.0))["prod_bound"]
    c = B.lemma39_bounds(3, 5.0, ONES.with_values(kappa7=3.0))["prod_bound"]
    assert log_of(c) - log_of(b) == pytest.approx(log_of(b) - log_of(a), rel=1e-9)
    L = ONES.with_values(kappa6=2.5)
    x = float(B.lemma39_bounds(2, 5.0, L)["loglogV_bound"])
    y = float(B.lemma39_bounds(3, 5.0, L)["loglogV_bound"])
    assert y / x == pytest.approx(2.5)


def test_chained_regulator_consistency():
    # with kappa5 chosen to dominate C_d N^(1/2) (e^h h)^d, the lemma39 regulator bound dominates prop310
    logN_base, h = math.log(6), 1.0
    k5 = B.kappa5_dominating(8, logN_base, h)
    L = ONES.with_values(kappa5=k5)
    for d in range(1, 9):
        for logD in (0.0, 1.0, 10.0, 100.0):
            lem = B.lemma39_bounds(d, logD, L)["reg_bound"]
            prop = B.prop310_reg_bound(d, logD, B.conductor_transfer(d, logN_base), h)
            assert compare(lem, prop) >= 0


def test_thm34_examples(frozen):
    t = B.thm34_bound(1, 0.5, 0.0, ONES.with_values(alpha1=2.0))
    assert t.level == 1 and t.value == pytest.approx(2.0)
    a = B.thm34_exponent(2, 3.0, 1.0, ONES)
    b = B.thm34_exponent(2, 3.0, 1.0, ONES.with_values(alpha2=2.0))
    assert float(b) - 1 == pytest.approx(2 * (float(a) - 1))
    t = B.thm34_bound(4, 12.377, 1.7918, ONES)
    assert t.value == pytest.approx(frozen["thm34_d4_example"], rel=1e-12)
    assert B.thm34_bound(2, 1.386, 0.693, ONES).level == 1


def test_thm42_examples(frozen):
    t, b1, b2 = B.thm42_abc_bound(1, 0.0, 0.0, ONES)
    assert (b1, b2) == (1, 1) and t.value == pytest.approx(1)
    t, _, _ = B.thm42_abc_bound(1, 0.0, 1.0, ONES)
    assert t.value == pytest.approx(frozen["thm42_d1_rad1"])
    t2, _, _ = B.thm42_abc_bound(1, 0.0, 2.0, ONES)
    assert t2.value - 1 == pytest.approx(8 * (t.value - 1))


def test_remark41_rows():
    rows = B.remark41_report(2, 2, 1.0, 1.0, 1.0, ONES)
    assert len(rows) == 8
    by = {r.factor: r for r in rows}
    assert by["r^(2r^2)"].log_contribution == pytest.approx(8 * math.log(2))
    assert by["exp(8 r^2 Sigma_S)"].log_contribution == pytest.approx(32)
    assert by["exp(8 r^2 Sigma_S)"].rad_growth == "rad^3"
    assert by["exp(gamma1 d r Sigma_S)"].log_contribution == pytest.approx(4)
    zero = B.remark41_report(2, 2, 0.0, 1.0, 1.0, ONES)
    assert [r.log_contribution for r in zero][-2:] == [0, 0]
    text = B.render_report(rows)
    assert text == B.render_report(B.remark41_report(2, 2, 1.0, 1.0, 1.0, ONES))
    assert len(text.splitlines()) == 9


def test_bound_json_carries_ledger():
    out = B.bound_json(B.thm34_bound(2, 1.0, 1.0, ONES), ONES, ["p"])
    assert out["ledger_hash"] == ONES.hash and out["proxies_used"] == ["p"] and out["level"] == 1


@pytest.mark.parametrize("name", sorted(ORACLE_CASES))
def test_oracle_agreement(name):
    rng = random.Random(hash(name) & 0xFFFF)
    for _ in range(20):
        assert ORACLE_CASES[name](rng) <= 1e-9


@pytest.mark.parametrize("name,var", [(n, v) for n, (_, vs) in sorted(CHAIN_FUNCTIONS.items()) for v in vs])
def test_monotone_chain(name, var):
    assert chain_violations(name, var, random.Random(f"{name}:{var}"), 60) == 0


@given(st.integers(2, 200), st.integers(1, 12))
def test_conductor_cap_bounded(p, e):
    from ellbound.arith import is_prime

    if not is_prime(p):
        return
    assert B.conductor_exponent_cap(p, e) <= 8 * e


@given(st.floats(0, 50), st.floats(0, 50))
def test_rank_monotone_in_conductor(a, b):
    lo, hi = sorted((a, b))
    assert B.rank_bound(3, lo, 2.0) <= B.rank_bound(3, hi, 2.0)


@given(st.integers(1, 6), st.integers(1, 8), st.floats(0, 30))
def test_full_bound_at_zero_sigma_is_exact(r, d, logV):
    C = B.thm1_C_EK(r, d, logV, [1.5] * r, 0.3, ONES)
    assert B.thm1_full_bound(C, r, d, 0.0, ONES) == C
