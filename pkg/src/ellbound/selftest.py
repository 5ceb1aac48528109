"""Built-in example assertions, run by `ellbound selftest`."""
from __future__ import annotations

import math
import os
import tempfile
from fractions import Fraction

from .errors import MissingKey, NonPositiveValue

# frozen regression values (computed by independent oracles, see tests/oracles)
NT_HEIGHT_3_5 = 0.6747883536140967      # h((3,5)) on y^2 = x^3 - 2, x_over_2
THM1_LOG_C_R1_D2 = 24 * math.log(2) + 1  # all inputs e, ones ledger
RANK_D1 = 327.3350
RANK_D1_KAPPA1 = 738.66


def _close(a, b, tol=1e-9):
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))


def _raises(exc, fn, *args):
    try:
        fn(*args)
    except exc:
        return True
    return False


def _checks():
    from . import bounds as B
    from .abcpipe import belyi_lift, build_triple, chevalley_weil_check
    from .elliptic import Curve, canonical_height, h_x, is_S_integral, is_torsion, scan_S_integral_points
    from .exactnum import QQ, NumberField
    from .heights import ProjectivePoint, height_via_mahler, log_plus, radical, weil_height
    from .ledger import ConstantsLedger, load_ledger
    from .mwlattice import MWBasis, masser_floor, minkowski_check, regulator, regulator_from_bsd
    from .places import PlaceSet, dedekind_hensel_bound, lift_places, ord_at, sigma_S, split_prime
    from .tower import TowerReal

    Qi = NumberField((1, 0, 1))
    Qr2 = NumberField((-2, 0, 1))
    Qr5 = NumberField((-1, -1, 1))
    i = Qi.gen
    r2 = Qr2.gen
    ones = ConstantsLedger.ones()
    E2 = Curve(0, -2)
    E1 = Curve(-1, 0)
    P35 = E2.point(3, 5)
    P2 = P35 + P35

    def places(K, p):
        return sorted((v.e, v.f) for v in split_prime(K, p))

    yield "field product", (1 + i) * (1 - i) == Qi(2)
    yield "rational sum", QQ(Fraction(2, 3)) + QQ(Fraction(1, 6)) == QQ(Fraction(5, 6))
    yield "field inverse", (1 + i).inverse() == (1 - i) * Fraction(1, 2)
    yield "norm and minpoly", (1 + i).norm() == 2 and (1 + i).minpoly() == (2, -2, 1)
    yield "rational minpoly", Qi(5).norm() == 25 and Qi(5).minpoly() == (-5, 1)
    yield "sqrt2 minpoly", r2.norm() == -2 and r2.minpoly() == (-2, 0, 1)
    yield "embeddings of i", all(d.width <= Fraction(1, 2 ** 64) and d.contains(z)
                                 for d, z in zip(sorted(i.embeddings(64), key=lambda d: d.im), (-1j, 1j)))
    yield "split 5 in Q(i)", places(Qi, 5) == [(1, 1), (1, 1)]
    yield "inert 3 in Q(i)", places(Qi, 3) == [(1, 2)]
    yield "ramified 2 in Q(i)", places(Qi, 2) == [(2, 1)]
    v2 = split_prime(QQ, 2)[0]
    yield "ord_2(8)", ord_at(QQ(8), v2) == 3
    yield "ord of 1+i", ord_at(1 + i, split_prime(Qi, 2)[0]) == 1
    yield "ord of 5 at split place", all(ord_at(Qi(5), v) == 1 for v in split_prime(Qi, 5))
    yield "Sigma_S {2,3}", _close(sigma_S(PlaceSet.from_primes(QQ, [2, 3])), math.log(6))
    yield "Sigma_S empty", sigma_S(PlaceSet.from_primes(QQ, [])) == 0
    yield "lift {2} to Q(i)", _close(sigma_S(lift_places(PlaceSet.from_primes(QQ, [2]), Qi)), math.log(2))
    yield "lift {5} to Q(i)", _close(sigma_S(lift_places(PlaceSet.from_primes(QQ, [5]), Qi)), 2 * math.log(5))
    yield "Dedekind-Hensel", _close(dedekind_hensel_bound(math.log(2), 2, 0), math.log(2) + 2.52)
    yield "log+ floor", log_plus(0) == 1 and log_plus(0.5) == 1 and _close(log_plus(math.e ** 3), 3)
    yield "h(4:6)", _close(weil_height((4, 6)), math.log(3))
    yield "h(1:1)", weil_height((1, 1)) == 0
    yield "h(1:sqrt2)", _close(weil_height(ProjectivePoint((Qr2(1), r2))), 0.5 * math.log(2), 1e-9)
    yield "Mahler h(1/3)", _close(height_via_mahler(QQ(Fraction(1, 3))), math.log(3), 1e-9)
    yield "Mahler golden ratio", _close(height_via_mahler(Qr5.gen), 0.5 * math.log((1 + math.sqrt(5)) / 2), 1e-9)
    rad, S = radical((1, 8, 9))
    yield "radical (1:8:9)", _close(rad, math.log(6)) and S.primes == [2, 3]
    rad, S = radical((1, 1, 2))
    yield "radical (1:1:2)", _close(rad, math.log(2)) and S.primes == [2]
    yield "doubling on y^2=x^3-2", P2 == E2.point(Fraction(129, 100), Fraction(-383, 1000))
    yield "2-torsion sum", (E1.point(0, 0) + E1.point(0, 0)).is_zero()
    yield "h_x", h_x(E2.O) == 0 and _close(h_x(P35), math.log(3)) and _close(h_x(P2), math.log(129))
    yield "NT height regression", abs(canonical_height(P35) - NT_HEIGHT_3_5) <= 2e-6
    yield "torsion (0,0)", is_torsion(E1.point(0, 0)).order == 2 and is_torsion(E1.O).order == 1
    yield "non-torsion (3,5)", not is_torsion(P35).torsion
    S25 = PlaceSet.from_primes(QQ, [2, 5])
    S0 = PlaceSet.from_primes(QQ, [])
    yield "S-integrality", (is_S_integral(P35, S0) and not is_S_integral(P2, S0) and is_S_integral(P2, S25))
    pts = {P.to_json()[0] for P in scan_S_integral_points(E2, S0, math.log(200)) if not P.is_zero()}
    yield "scan finds (3,5)", "3" in pts
    yield "regulator r=0", regulator(MWBasis.from_gram([])).value == 1
    yield "Minkowski diagonal", minkowski_check(MWBasis.from_gram([[2, 0], [0, 3]])).bound == 96
    yield "Minkowski skew", _close(minkowski_check(MWBasis.from_gram([[2, 1], [1, 3]])).bound, 80)
    yield "Masser floor", _close(masser_floor(2, 0.5), 0.5 / (8 * math.log(2) ** 2))
    yield "BSD rearrangement", regulator_from_bsd(2, 1, 2, 1, 1, 1) == 8
    yield "tower exp", TowerReal(3.0).exp().level == 1
    yield "tower compare", TowerReal(5.0, 1) > TowerReal(4.9, 1)
    yield "tower log", TowerReal(7.0, 2).log() == TowerReal(7.0, 1)
    e = math.e
    yield "thm1 example", _close(B.thm1_C_EK(1, 2, e, [e], e, ones).value, THM1_LOG_C_R1_D2)
    C = B.thm1_C_EK(1, 1, e, [e], e, ones)
    yield "thm1 r=0", float(B.thm1_full_bound(C, 0, 1, 1.0, ones)) == ones.gamma0
    yield "thm1 Sigma_S", _close(B.thm1_full_bound(C, 1, 1, 1.0, ones).value, C.value + 9)
    yield "rank bound", _close(B.rank_bound(1, 0, 0), RANK_D1, 1e-6)
    yield "rank kappa1", abs(B.rank_bound(1, 1, 0) - B.rank_bound(1, 0, 0) - RANK_D1_KAPPA1) < 0.01
    yield "conductor caps", (B.conductor_exponent_cap(7, 3) == 2 and B.conductor_exponent_cap(2, 1) == 8
                             and B.conductor_exponent_cap(3, 2) == 8)
    yield "conductor transfer", (_close(B.conductor_transfer(1, math.log(2)), 8 * math.log(2))
                                 and B.conductor_transfer(4, 1) == 32)
    base = B.prop310_reg_bound(2, 1.0, 1.0, 1.0).log_float()
    yield "prop310 D_K exponent", _close(B.prop310_reg_bound(2, 3.0, 1.0, 1.0).log_float() - base, 3, 1e-6)
    yield "prop310 N_F exponent", _close(B.prop310_reg_bound(2, 1.0, 3.0, 1.0).log_float() - base, 1, 1e-6)
    t34 = B.thm34_bound(2, 1.386, 0.693, ones)
    yield "thm34 level", t34.level == 1
    t42, b1, b2 = B.thm42_abc_bound(1, 0.0, 0.0, ones)
    yield "thm42 rad=0", b1 == 1 and _close(t42.value, b2)
    yield "thm42 cubic", _close(B.thm42_abc_bound(1, 0.0, 2.0, ones)[0].value - b2,
                                8 * (B.thm42_abc_bound(1, 0.0, 1.0, ones)[0].value - b2))
    t = build_triple(1, 8, 9)
    yield "triple (1,8,9)", _close(t.rad, math.log(6)) and _close(t.h_abc, math.log(9))
    t = build_triple(3, 5, 8)
    yield "triple (3,5,8)", t.S1.primes == [2, 3, 5] and _close(t.rad, math.log(30))
    lift = belyi_lift(build_triple(1, 1, 2))
    yield "lift (1,1,2)", lift.degree == 2 and abs(lift.L.poly_disc) in (4, 16)
    yield "Chevalley-Weil (1,1,2)", chevalley_weil_check(lift).passed
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "ones.toml")
        ones.write(path)
        yield "ledger roundtrip", load_ledger(path).hash == ones.hash
        with open(path, "w") as fh:
            fh.write("".join(line for line in ones.to_toml().splitlines(True) if not line.startswith("kappa4")))
        yield "ledger missing key", _raises(MissingKey, load_ledger, path)
        with open(path, "w") as fh:
            fh.write(ones.to_toml().replace("kappa4 = 1.0", "kappa4 = -1.0"))
        yield "ledger negative", _raises(NonPositiveValue, load_ledger, path)


def run_selftest() -> list[tuple[str, bool, str]]:
    """[(name, passed, detail)] for every example check."""
    results = []
    it = _checks()
    last = "start"
    while True:
        try:
            name, ok = next(it)
        except StopIteration:
            break
        except Exception as exc:  # an example raised instead of returning
            results.append((f"check after {last!r}", False, f"{type(exc).__name__}: {exc}"))
            break
        last = name
        results.append((name, bool(ok), ""))
    return results
