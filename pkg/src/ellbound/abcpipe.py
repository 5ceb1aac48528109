"""abc triples lifted to the CM curve y^2 = x^3 - x through a degree-4 Belyi map.

For a + b = c over Q, a point Q of E: y^2 = x^3 - x with
f(Q) = -(1 - x)^2 / (4x) = a/c is constructed exactly over its field of
definition L = Q(Q), and the ramification, place and height relations that
turn a height bound for Q into an abc-type bound are checked.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .arith import factor_int, prime_divisors, valuation
from .bounds import (
    F0_PROXY_TAG,
    bound_json,
    rank_bound,
    remark41_report,
    thm34_bound,
    thm42_abc_bound,
)
from .elliptic import Curve, CurvePoint
from .errors import (
    BudgetError,
    DegenerateTriple,
    IndeterminateSplitting,
    NotASum,
    PrimitiveElementSearchFailed,
    ZeroElement,
)
from .exactnum import QQ, AlgebraicNumber, NumberField, det_exact, parse_rational, poly_discriminant, solve_exact
from .heights import HEIGHT_FACTOR_BUDGET_BITS, ProjectivePoint, _coprime_integers, height_x, weil_height
from .ledger import ConstantsLedger
from .places import PlaceSet, dedekind_hensel_bound, lift_places, sigma_S, split_prime

BELYI_DEGREE = 4
DEFAULT_S0 = (2,)
PRIMITIVE_K_MAX = 20
# bad primes of y^2 = x^3 - x (discriminant 64)
CURVE_BAD_PRIMES = (2,)


# ---------------------------------------------------------------------------
# triples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbcTriple:
    a: Fraction
    b: Fraction
    c: Fraction
    S1: PlaceSet
    rad: float
    h_abc: float

    @property
    def integers(self) -> tuple[int, int, int]:
        return tuple(_coprime_integers((self.a, self.b, self.c)))

    def to_json(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c),
                "S1": self.S1.primes, "rad": self.rad, "h": self.h_abc}


def s1_primes(a: Fraction, b: Fraction, c: Fraction) -> list[int]:
    """Primes where ord(a), ord(b), ord(c) take at least two values."""
    nums = [abs(q.numerator) for q in (a, b, c)] + [q.denominator for q in (a, b, c)]
    out = []
    for p in prime_divisors(*nums):
        if len({valuation(a, p), valuation(b, p), valuation(c, p)}) >= 2:
            out.append(p)
    return out


def build_triple(a, b, c) -> AbcTriple:
    a, b, c = (parse_rational(v) for v in (a, b, c))
    if 0 in (a, b, c):
        raise ZeroElement("a, b and c must be nonzero")
    if a + b != c:
        raise NotASum(f"{a} + {b} != {c}")
    S1 = PlaceSet.from_primes(QQ, s1_primes(a, b, c))
    return AbcTriple(a, b, c, S1, sigma_S(S1), weil_height((a, b, c)))


# ---------------------------------------------------------------------------
# exact arithmetic in Q(sqrt n)(sqrt w)
# ---------------------------------------------------------------------------

def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _squarefree_split(q: Fraction) -> tuple[Fraction, int]:
    """q = r^2 n with n a squarefree integer."""
    sign = -1 if q < 0 else 1
    N = abs(q.numerator) * q.denominator
    n, r = 1, 1
    for p, e in factor_int(N, HEIGHT_FACTOR_BUDGET_BITS).items():
        if e % 2:
            n *= p
        r *= p ** (e // 2)
    return Fraction(r, q.denominator), sign * n


def _sqrt_in_field(w: AlgebraicNumber, n: int) -> Optional[AlgebraicNumber]:
    """A square root of w in K = Q(sqrt n) (generator t, t^2 = n), if one exists."""
    K = w.field
    if K.degree == 1:
        r = _rational_sqrt(w.to_rational())
        return None if r is None else K(r)
    u, v = w.coords
    if v == 0:
        r = _rational_sqrt(u)
        if r is not None:
            return K(r)
        r = _rational_sqrt(u / n)
        return None if r is None else K([0, r])
    m = _rational_sqrt(u * u - n * v * v)
    if m is None:
        return None
    for mm in (m, -m):
        alpha = _rational_sqrt((u + mm) / 2)
        if alpha:
            root = K([alpha, v / (2 * alpha)])
            if root * root == w:
                return root
    return None


class _Tower:
    """Elements p + q*Y of K(Y), Y^2 = w, with p, q in K (q = 0 when rel = 1)."""

    def __init__(self, K: NumberField, w: AlgebraicNumber, rel: int):
        self.K, self.w, self.rel = K, w, rel

    def mul(self, u, v):
        (p1, q1), (p2, q2) = u, v
        return (p1 * p2 + q1 * q2 * self.w, p1 * q2 + p2 * q1)

    def coords(self, u) -> list[Fraction]:
        out = list(u[0].coords)
        if self.rel == 2:
            out += list(u[1].coords)
        return out

    @property
    def degree(self) -> int:
        return self.K.degree * self.rel


def _integral_scale(m: Sequence[Fraction]) -> int:
    """Least s > 0 with s^(D-i) m_i integral for the monic m of degree D."""
    D = len(m) - 1
    dens = [Fraction(c).denominator for c in m[:D]]
    s = 1
    for p in prime_divisors(*dens):
        s *= p ** max(-(-valuation(den, p) // (D - i)) for i, den in enumerate(dens))
    return s


def _primitive_element(T: _Tower, x, y):
    """Smallest k with theta = x + k y generating L; returns (k, monic minpoly, x and y in theta-powers)."""
    D = T.degree
    one = (T.K.one(), T.K.zero())
    for k in range(PRIMITIVE_K_MAX + 1):
        theta = (x[0] + y[0] * k, x[1] + y[1] * k)
        powers = [one]
        for _ in range(D):
            powers.append(T.mul(powers[-1], theta))
        cols = [T.coords(pw) for pw in powers[:D]]
        M = [[cols[j][i] for j in range(D)] for i in range(D)]
        if det_exact(M) == 0:
            continue
        c = solve_exact(M, T.coords(powers[D]))
        m = [-ci for ci in c] + [Fraction(1)]
        return k, m, solve_exact(M, T.coords(x)), solve_exact(M, T.coords(y))
    raise PrimitiveElementSearchFailed(f"no primitive x + k y for k <= {PRIMITIVE_K_MAX}")


def _integral_generators(t: AbcTriple, x: AlgebraicNumber, y: AlgebraicNumber) -> tuple:
    """Integral elements built from X = Cx and Y = C^2 y, tried when the field generator fails Dedekind."""
    C = t.integers[2]
    X, Y = x * C, y * (C * C)
    gens = [X + Y * j for j in range(1, 6)]
    gens += [X * Y + X * j for j in range(3)]
    gens += [X * X + Y * j for j in range(1, 4)]
    return tuple(gens)


# ---------------------------------------------------------------------------
# the lift
# ---------------------------------------------------------------------------

def belyi_map(x: AlgebraicNumber) -> AlgebraicNumber:
    """f(x, y) = -(1 - x)^2 / (4x)."""
    one = x.field.one()
    return -((one - x) * (one - x)) / (x * 4)


@dataclass(frozen=True)
class BelyiLift:
    triple: AbcTriple
    x_minpoly: tuple
    y_minpoly: tuple
    L: NumberField
    Q: CurvePoint
    S_prime: PlaceSet
    logD_L_bound: float
    k: int = 0
    scale: int = 1
    S0: tuple = DEFAULT_S0
    sigma_S: float = 0.0
    logD_L_dedekind_hensel: float = 0.0
    logD_L_disc_proxy: float = 0.0
    generators: tuple = field(default=(), repr=False, compare=False)

    @property
    def degree(self) -> int:
        return self.L.degree

    @property
    def S_primes(self) -> list[int]:
        return sorted(set(self.triple.S1.primes) | set(self.S0))

    def to_json(self) -> dict:
        return {
            "triple": self.triple.to_json(),
            "L": list(self.L.min_poly),
            "degree": self.degree,
            "primitive_element": {"k": self.k, "scale": self.scale},
            "Q": self.Q.to_json(),
            "x_minpoly": [str(c) for c in self.x_minpoly],
            "y_minpoly": [str(c) for c in self.y_minpoly],
            "S0": list(self.S0),
            "sigma_S": self.sigma_S,
            "S_prime": self.S_prime.to_json(),
            "sigma_S_prime": sigma_S(self.S_prime),
            "logD_L_bound": self.logD_L_bound,
            "logD_L_dedekind_hensel": self.logD_L_dedekind_hensel,
            "logD_L_disc_proxy": self.logD_L_disc_proxy,
        }


def belyi_lift(t: AbcTriple, S0: Sequence[int] = DEFAULT_S0) -> BelyiLift:
    """Exact point Q with f(Q) = (a:c) and its field of definition."""
    a, c = t.a, t.c
    # c x^2 + (4a - 2c) x + c = 0, discriminant -16ab
    disc = -16 * a * t.b
    if c == 0 or disc == 0:
        raise DegenerateTriple("the lift equation degenerates")
    r, n = _squarefree_split(disc)
    if n == 1:
        K = QQ
        x = K((2 * c - 4 * a + r) / (2 * c))
    else:
        K = NumberField((-n, 0, 1))
        x = K([(2 * c - 4 * a) / (2 * c), r / (2 * c)])
    w = x * x * x - x
    y0 = _sqrt_in_field(w, n)
    if y0 is not None:
        T = _Tower(K, w, 1)
        xt, yt = (x, K.zero()), (y0, K.zero())
    else:
        T = _Tower(K, w, 2)
        xt, yt = (x, K.zero()), (K.zero(), K.one())

    if T.degree == 1:
        L, scale, k = QQ, 1, 0
        xL, yL = QQ(x.to_rational()), QQ(y0.to_rational())
    else:
        k, m, cx, cy = _primitive_element(T, xt, yt)
        D = T.degree
        scale = _integral_scale(m)
        L = NumberField(tuple(int(m[i] * scale ** (D - i)) for i in range(D + 1)))
        # theta = gen / scale
        xL = L([cx[i] / Fraction(scale) ** i for i in range(D)])
        yL = L([cy[i] / Fraction(scale) ** i for i in range(D)])

    E = Curve(-1, 0, L)
    Q = CurvePoint(E, xL, yL)  # checks y^2 = x^3 - x exactly
    if belyi_map(xL) != L(a / c):
        raise AssertionError("f(Q) != a/c")

    gens = _integral_generators(t, xL, yL) if L.degree > 1 else ()
    S0 = tuple(sorted(set(int(p) for p in S0)))
    S_base = PlaceSet.from_primes(QQ, sorted(set(t.S1.primes) | set(S0)))
    sig = sigma_S(S_base)
    S_prime = lift_places(S_base, L, worst_case=True, generators=gens)
    dh = dedekind_hensel_bound(sig, L.degree, 0.0)
    proxy = math.log(abs(L.poly_disc)) if L.degree > 1 else 0.0
    return BelyiLift(t, tuple(xL.minpoly()), tuple(yL.minpoly()), L, Q, S_prime, min(dh, proxy),
                     k, scale, S0, sig, dh, proxy, gens)


# ---------------------------------------------------------------------------
# Chevalley-Weil
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChevalleyWeilVerdict:
    passed: bool
    degree: int
    degree_ok: bool
    ramified: tuple  # ramified primes outside the allowed set
    allowed: tuple
    violations: tuple
    undetermined: tuple
    method: str

    def to_json(self) -> dict:
        return {"passed": self.passed, "degree": self.degree, "degree_ok": self.degree_ok,
                "ramified": list(self.ramified), "allowed": list(self.allowed),
                "violations": list(self.violations), "undetermined": list(self.undetermined),
                "method": self.method}


def _is_ramified(L: NumberField, p: int, generators=()) -> Optional[bool]:
    try:
        return any(v.e > 1 for v in split_prime(L, p, generators))
    except IndeterminateSplitting:
        return None


def _tower_candidates(lift: BelyiLift) -> list[int]:
    # L = Q(sqrt(-ab), sqrt(x^3 - x)) and N(x^3 - x) = 16ab/c^2, so only
    # primes of 2abc can ramify
    A, B, C = lift.triple.integers
    return prime_divisors(2, A, B, C)


def chevalley_weil_check(lift: BelyiLift, S0: Optional[Sequence[int]] = None) -> ChevalleyWeilVerdict:
    """Ramified primes of L must lie in S1 u S0 and [L:Q] <= deg f."""
    S0 = lift.S0 if S0 is None else tuple(S0)
    L = lift.L
    allowed = tuple(sorted(set(lift.triple.S1.primes) | set(int(p) for p in S0)))
    degree_ok = L.degree <= BELYI_DEGREE
    if L.degree == 1:
        return ChevalleyWeilVerdict(degree_ok, 1, degree_ok, (), allowed, (), (), "trivial")
    disc = abs(L.poly_disc)
    try:
        candidates = prime_divisors(disc, budget_bits=HEIGHT_FACTOR_BUDGET_BITS)
        method = "factored disc(m)"
    except BudgetError:
        candidates = [p for p in _tower_candidates(lift) if disc % p == 0]
        method = "tower discriminant"
    ramified, violations, undetermined = [], [], []
    for p in candidates:
        if p in allowed:
            continue
        status = _is_ramified(L, p, lift.generators)
        if status is None:
            undetermined.append(p)
        elif status:
            ramified.append(p)
            violations.append(p)
    passed = degree_ok and not violations and not undetermined
    return ChevalleyWeilVerdict(passed, L.degree, degree_ok, tuple(ramified), allowed,
                                tuple(violations), tuple(undetermined), method)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _abc_int_height_bound_ok(t: AbcTriple) -> tuple[float, bool]:
    """h(a:c) and the exact check max(|A|,|B|,|C|) <= 2 max(|A|,|C|)."""
    A, B, C = t.integers
    h_ac = math.log(max(abs(A), abs(C)))
    return h_ac, max(abs(A), abs(B), abs(C)) <= 2 * max(abs(A), abs(C))


def end_to_end_report(t: AbcTriple, ledger: Optional[ConstantsLedger] = None,
                      S0: Sequence[int] = DEFAULT_S0) -> dict:
    """Lift, checks and bound evaluation for one triple."""
    ledger = ledger or ConstantsLedger()
    lift = belyi_lift(t, S0)
    cw = chevalley_weil_check(lift)
    L, d = lift.L, lift.degree
    fQ = belyi_map(lift.Q.x)
    f_point_matches = ProjectivePoint((fQ, L.one())) == ProjectivePoint((L(t.a), L(t.c)))
    h_ac, h_abc_ok = _abc_int_height_bound_ok(t)
    h_fQ = height_x(fQ)
    h_f = h_fQ / BELYI_DEGREE
    hx = height_x(lift.Q.x)
    sig_prime = sigma_S(lift.S_prime)
    sigma_ok = sig_prime <= d * lift.sigma_S + 1e-9
    logN_F0 = d * sum(math.log(p) for p in CURVE_BAD_PRIMES)
    r_proxy = int(math.floor(rank_bound(d, logN_F0, lift.logD_L_bound)))
    t34 = thm34_bound(d, lift.logD_L_bound, sig_prime, ledger)
    t42, beta1, beta2 = thm42_abc_bound(1, 0.0, t.rad, ledger)
    rows = remark41_report(r_proxy, d, sig_prime, t.rad, lift.logD_L_bound, ledger)
    checks = {
        "f(Q) = (a:c)": f_point_matches,
        "on curve": lift.Q.curve.contains(lift.Q.x, lift.Q.y),
        "[L:Q] <= deg f": d <= BELYI_DEGREE,
        "h(f(Q)) = h(a:c)": h_fQ == h_ac,
        "h(a:b:c) <= h(a:c) + log 2": h_abc_ok,
        "Sigma_S' <= [L:Q] Sigma_S": sigma_ok,
        "Chevalley-Weil": cw.passed,
    }
    return {
        "triple": t.to_json(),
        "lift": lift.to_json(),
        "chevalley_weil": cw.to_json(),
        "h_x(Q)": hx,
        "h(a:c)": h_ac,
        "h_f(Q)": h_f,
        "sigma_S_prime": sig_prime,
        "rank_proxy": r_proxy,
        "height_bound": bound_json(t34, ledger, [F0_PROXY_TAG, "rank: explicit upper bound",
                                                "log D_L: min(Dedekind-Hensel, log|disc m|)"]),
        "abc_bound": bound_json(t42, ledger, [], beta1=beta1, beta2=beta2),
        "h_le_bound": t.h_abc <= t42,
        "contributions": [row.to_json() for row in rows],
        "checks": checks,
        "verified": all(checks.values()),
        "ledger_hash": ledger.hash,
    }


def abc_quality_scan(height_cap: int, ledger: Optional[ConstantsLedger] = None,
                     use_numba: Optional[bool] = None) -> list[dict]:
    """Coprime a <= b, c = a + b <= cap with h, rad and quality, by quality descending."""
    from ._kernels import MAX_PAIR_CAP, coprime_pairs

    if height_cap > MAX_PAIR_CAP:
        raise BudgetError(f"cap {height_cap} exceeds {MAX_PAIR_CAP}")
    ledger = ledger or ConstantsLedger()
    A, B, C, R = coprime_pairs(int(height_cap), use_numba)
    rows = []
    for a, b, c, r in zip(A.tolist(), B.tolist(), C.tolist(), R.tolist()):
        h = math.log(c)
        rad = math.log(r)
        bound, _, _ = thm42_abc_bound(1, 0.0, rad, ledger)
        rows.append({"a": a, "b": b, "c": c, "h": h, "rad": rad, "quality": h / rad,
                     "bound_log": bound.value})
    rows.sort(key=lambda row: (-row["quality"], row["c"], row["a"]))
    return rows


def scan_jsonl(rows: Sequence[dict]) -> str:
    return "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows)
