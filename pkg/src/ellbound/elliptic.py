"""Short Weierstrass curves y^2 = x^3 + A x + B over a number field.

Canonical heights use the doubling limit.  Over Q the x-coordinate is kept
as a coprime integer pair (X, Z) and doubled with the homogeneous
duplication formula; the common factor that appears after a doubling always
divides a fixed resultant, so it can be removed without a full-size gcd.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

import gmpy2
from mpmath import iv

from .errors import (
    ConvergenceFailure,
    CoordinateBlowup,
    BudgetExceeded,
    DomainError,
    FieldMismatch,
    IndeterminateSplitting,
    Undecided,
)
from .exactnum import QQ, AlgebraicNumber, NumberField, parse_rational
from .heights import height_x
from .places import PlaceSet, ord_at, split_prime
from .arith import prime_divisors


@dataclass
class HeightConfig:
    """Defaults for canonical heights and torsion detection."""

    normalization: str = "x_over_2"  # or "x"
    n_max: int = 40
    digit_budget: int = 10 ** 7
    torsion_m_max: int = 24
    torsion_tau: float = 1e-4
    scan_budget_log: float = 15.0


CONFIG = HeightConfig()
NORMALIZATIONS = ("x_over_2", "x")


def _norm_factor(normalization: Optional[str]) -> float:
    norm = normalization or CONFIG.normalization
    if norm not in NORMALIZATIONS:
        raise DomainError(f"unknown height normalization {norm!r}")
    return 0.5 if norm == "x_over_2" else 1.0


# ---------------------------------------------------------------------------
# curves and points
# ---------------------------------------------------------------------------

class Curve:
    """y^2 = x^3 + A x + B."""

    __slots__ = ("field", "A", "B")

    def __init__(self, A, B, field: Optional[NumberField] = None):
        if field is None:
            field = next((c.field for c in (A, B) if isinstance(c, AlgebraicNumber)), QQ)
        A, B = field(A), field(B)
        if (A * A * A * 4 + B * B * 27).is_zero():
            raise DomainError("singular curve: 4A^3 + 27B^2 = 0")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    def __setattr__(self, *_):
        raise AttributeError("Curve is immutable")

    @classmethod
    def parse(cls, text: str, field: Optional[NumberField] = None) -> "Curve":
        """Parse "A,B"."""
        parts = [s.strip() for s in text.strip().strip("()").split(",")]
        if len(parts) != 2:
            raise DomainError(f"expected 'A,B', got {text!r}")
        field = field or QQ
        return cls(field(parse_rational(parts[0])), field(parse_rational(parts[1])), field)

    @property
    def discriminant(self) -> AlgebraicNumber:
        return (self.A ** 3 * 4 + self.B ** 2 * 27) * -16

    @property
    def is_rational(self) -> bool:
        return self.field.degree == 1

    def rhs(self, x):
        return x * x * x + self.A * x + self.B

    def contains(self, x, y) -> bool:
        x, y = self.field(x), self.field(y)
        return y * y == self.rhs(x)

    @property
    def O(self) -> "CurvePoint":
        return CurvePoint(self, None, None)

    def point(self, x, y) -> "CurvePoint":
        return CurvePoint(self, x, y)

    def parse_point(self, text: str) -> "CurvePoint":
        text = text.strip()
        if text.upper() == "O":
            return self.O
        parts = [s.strip() for s in text.strip("()").split(",")]
        if len(parts) != 2:
            raise DomainError(f"expected '(x,y)' or 'O', got {text!r}")
        return self.point(parse_rational(parts[0]), parse_rational(parts[1]))

    def __eq__(self, other):
        return isinstance(other, Curve) and (self.field, self.A, self.B) == (other.field, other.A, other.B)

    def __hash__(self):
        return hash((self.field, self.A, self.B))

    def __repr__(self):
        return f"Curve(A={self.A}, B={self.B})"


class CurvePoint:
    """A point of E(K); x = y = None encodes the identity O."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve: Curve, x, y, check: bool = True):
        if (x is None) != (y is None):
            raise DomainError("both coordinates or neither must be given")
        if x is not None:
            x, y = curve.field(x), curve.field(y)
            if check and y * y != curve.rhs(x):
                raise DomainError(f"({x}, {y}) is not on {curve}")
        object.__setattr__(self, "curve", curve)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __setattr__(self, *_):
        raise AttributeError("CurvePoint is immutable")

    def is_zero(self) -> bool:
        return self.x is None

    def __eq__(self, other):
        if not isinstance(other, CurvePoint):
            return NotImplemented
        return self.curve == other.curve and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.curve, self.x, self.y))

    def __neg__(self):
        if self.is_zero():
            return self
        return CurvePoint(self.curve, self.x, -self.y, check=False)

    def __add__(self, other):
        return group_law(self, other)

    def __sub__(self, other):
        return group_law(self, -other)

    def __mul__(self, n: int):
        return multiply(self, n)

    __rmul__ = __mul__

    def to_json(self):
        if self.is_zero():
            return "O"
        return [str(self.x), str(self.y)]

    def __repr__(self):
        if self.is_zero():
            return "O"
        return f"({self.x}, {self.y})"


def group_law(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    """Chord-tangent addition."""
    if P.curve != Q.curve:
        raise FieldMismatch("points lie on different curves")
    E = P.curve
    if P.is_zero():
        return Q
    if Q.is_zero():
        return P
    if P.x == Q.x:
        if (P.y + Q.y).is_zero():
            return E.O
        lam = (P.x * P.x * 3 + E.A) / (P.y * 2)
    else:
        lam = (Q.y - P.y) / (Q.x - P.x)
    x3 = lam * lam - P.x - Q.x
    y3 = lam * (P.x - x3) - P.y
    return CurvePoint(E, x3, y3, check=False)


def multiply(P: CurvePoint, n: int) -> CurvePoint:
    n = int(n)
    if n < 0:
        return multiply(-P, -n)
    result = P.curve.O
    addend = P
    while n:
        if n & 1:
            result = group_law(result, addend)
        n >>= 1
        if n:
            addend = group_law(addend, addend)
    return result


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------

def h_x(Q: CurvePoint) -> float:
    """h(1 : x(Q)); 0 at O."""
    if Q.is_zero():
        return 0.0
    return height_x(Q.x)


def _log_mpz(n) -> float:
    n = abs(n)
    bl = int(n.bit_length())
    if bl <= 1000:
        return math.log(int(n))
    shift = bl - 64
    return math.log(int(n >> shift)) + shift * math.log(2)


@dataclass(frozen=True)
class HeightEstimate:
    value: float
    steps: int
    last_delta: float
    error_bound: float = 0.0


def height_difference_bound(E: Curve) -> float:
    """B with |h(Q) - h_x(Q)/2| <= B for all Q (x_over_2 normalization).

    Uses Silverman's explicit bounds for an integral short Weierstrass model,
    -h(j)/8 - h(D)/12 - 0.973 <= h(Q) - h_x(Q)/2 <= h(j)/12 + h(D)/12 + 1.07.
    """
    if E.is_rational:
        A, B, _ = _integral_model(E)
        E = Curve(A, B)
    disc = E.discriminant
    j = (E.A ** 3 * -6912) / (E.A ** 3 * 4 + E.B ** 2 * 27)  # -1728 (4A)^3 / disc
    hj = height_x(j) if not j.is_zero() else 0.0
    hd = height_x(disc)
    return max(hj / 8 + hd / 12 + 0.973, hj / 12 + hd / 12 + 1.07)


def _integral_model(E: Curve):
    """(A', B', u) integral with x' = u^2 x, an isomorphic model over Q."""
    A, B = E.A.to_rational(), E.B.to_rational()
    u = 1
    for p in prime_divisors(A.denominator, B.denominator):
        k = 0
        while (A * Fraction(p) ** (4 * k)).denominator != 1 or (B * Fraction(p) ** (6 * k)).denominator != 1:
            k += 1
        u *= p ** k
    return int(A * u ** 4), int(B * u ** 6), u


def _dup_resultant(A: int, B: int) -> int:
    # gcd(F(X,Z), G(X,Z)) divides this for coprime X, Z
    return abs(4096 * (4 * A ** 3 + 27 * B ** 2) ** 2)


def _exact_terms(X, Z, A: int, B: int, n_max: int, digit_budget: int):
    """Yield (n, log max(|X_n|, |Z_n|) / 4^n, 0.0) on exact coprime pairs; digits grow like 4^n."""
    X, Z = gmpy2.mpz(X), gmpy2.mpz(Z)
    A_, B_ = gmpy2.mpz(A), gmpy2.mpz(B)
    R = gmpy2.mpz(_dup_resultant(A, B))
    bit_budget = int(digit_budget * math.log2(10))
    yield 0, _log_mpz(max(abs(X), abs(Z))), 0.0
    scale = 1
    for n in range(1, n_max + 1):
        X2, Z2 = X * X, Z * Z
        num = X2 * X2 - 2 * A_ * X2 * Z2 - 8 * B_ * X * Z * Z2 + A_ * A_ * Z2 * Z2
        den = 4 * Z * (X * X2 + A_ * X * Z2 + B_ * Z * Z2)
        g = gmpy2.gcd(gmpy2.gcd(R, num % R), den % R)
        if g > 1:
            num //= g
            den //= g
        X, Z = num, den
        if max(X.bit_length(), Z.bit_length()) > bit_budget:
            raise CoordinateBlowup(f"doubling step {n} exceeds the {digit_budget}-digit budget")
        scale *= 4
        yield n, _log_mpz(max(abs(X), abs(Z))) / scale, 0.0


def _interval_terms(X0: int, Z0: int, A: int, B: int, n_max: int, prec: int):
    """The same sequence without digit growth.

    log M_{n+1} = 4 log M_n + log max(|F|, |G|)(X_n/M_n, Z_n/M_n) - log g_n,
    where g_n = gcd(F, G) divides the resultant R.  The normalized pair is
    carried in interval arithmetic and (X_n, Z_n) modulo R^(n_max+1), which
    is enough to recover every g_n exactly.  Yields (n, midpoint, width).
    """
    R = _dup_resultant(A, B)
    mod = R ** (n_max + 1)
    rx, rz = X0 % mod, Z0 % mod
    M0 = max(abs(X0), abs(Z0))
    with _IV_LOCK:
        saved = iv.prec
        iv.prec = prec
        try:
            xs = iv.mpf(X0) / M0
            zs = iv.mpf(Z0) / M0
            s = iv.log(iv.mpf(M0))
            A_iv, B_iv = iv.mpf(A), iv.mpf(B)
            terms = [(0, float(s.mid), float(s.delta))]
            scale = 1
            for n in range(1, n_max + 1):
                Fr = (rx ** 4 - 2 * A * rx ** 2 * rz ** 2 - 8 * B * rx * rz ** 3 + A * A * rz ** 4) % mod
                Gr = (4 * rz * (rx ** 3 + A * rx * rz ** 2 + B * rz ** 3)) % mod
                g = math.gcd(math.gcd(R, Fr % R), Gr % R)
                mod //= g
                rx, rz = (Fr // g) % mod, (Gr // g) % mod
                x2, z2 = xs * xs, zs * zs
                F = x2 * x2 - 2 * A_iv * x2 * z2 - 8 * B_iv * xs * zs * z2 + A_iv * A_iv * z2 * z2
                G = 4 * zs * (xs * x2 + A_iv * xs * z2 + B_iv * zs * z2)
                aF, aG = abs(F), abs(G)
                m = iv.mpf([max(aF.a, aG.a), max(aF.b, aG.b)])
                if m.a <= 0:
                    break
                scale *= 4
                s = s + (iv.log(m) - iv.log(iv.mpf(g))) / scale
                xs, zs = F / m, G / m
                terms.append((n, float(s.mid), float(s.delta)))
        finally:
            iv.prec = saved
    return terms


_IV_LOCK = threading.Lock()


def doubling_terms(Q: CurvePoint, n: int, method: str = "interval", normalization: Optional[str] = None,
                   digit_budget: Optional[int] = None) -> list[tuple[int, float, float]]:
    """[(k, factor * log max(|X_k|, |Z_k|) / 4^k, width)] for k = 0..n on the integral model."""
    factor = _norm_factor(normalization)
    A, B, u = _integral_model(Q.curve)
    x = Q.x.to_rational() * u * u
    if method == "exact":
        budget = CONFIG.digit_budget if digit_budget is None else digit_budget
        raw = list(_exact_terms(x.numerator, x.denominator, A, B, n, budget))
    elif method == "interval":
        raw = _interval_terms(x.numerator, x.denominator, A, B, n, 96 + 12 * n)
    else:
        raise DomainError(f"unknown method {method!r}")
    return [(k, factor * v, factor * w) for k, v, w in raw]


def _canonical_height_Q(Q: CurvePoint, tol: float, factor: float, n_max: int, digit_budget: int,
                        method: str = "interval") -> HeightEstimate:
    E = Q.curve
    A, B, u = _integral_model(E)
    x = Q.x.to_rational() * u * u
    tail = 2 * factor * height_difference_bound(E)
    prec = 96 + 12 * n_max
    for _ in range(4):
        if method == "exact":
            terms = _exact_terms(x.numerator, x.denominator, A, B, n_max, digit_budget)
        else:
            terms = _interval_terms(x.numerator, x.denominator, A, B, n_max, prec)
        prev = None
        delta = math.inf
        widened = False
        for n, value, width in terms:
            value, width = factor * value, factor * width
            if width > tol / 8:
                widened = True
                break
            if prev is not None:
                delta = abs(value - prev)
                err = tail / 4 ** n + width / 2
                if delta < tol / 2 and err <= tol / 2:
                    return HeightEstimate(value, n, delta, err)
            prev = value
        if not widened:
            raise ConvergenceFailure(f"canonical height did not settle within {n_max} doublings (last step {delta:.3g})")
        prec *= 2
    raise ConvergenceFailure("interval doubling lost all precision")


def _canonical_height_generic(Q: CurvePoint, tol: float, factor: float, n_max: int, digit_budget: int) -> HeightEstimate:
    E = Q.curve
    x = Q.x
    tail = 2 * factor * height_difference_bound(E)
    prev = factor * height_x(x)
    scale = 1.0
    for n in range(1, n_max + 1):
        rhs = E.rhs(x)
        if rhs.is_zero():
            return HeightEstimate(0.0, n, 0.0)
        x2 = x * x
        x = (x2 * x2 - E.A * x2 * 2 - E.B * x * 8 + E.A * E.A) / (rhs * 4)
        size = sum(c.numerator.bit_length() + c.denominator.bit_length() for c in x.coords)
        if size > digit_budget * math.log2(10):
            raise CoordinateBlowup(f"doubling step {n} exceeds the {digit_budget}-digit budget")
        scale *= 4.0
        cur = factor * height_x(x) / scale
        delta = abs(cur - prev)
        if delta < tol / 2 and tail / scale <= tol / 2:
            return HeightEstimate(cur, n, delta, tail / scale)
        prev = cur
    raise ConvergenceFailure(f"canonical height did not settle within {n_max} doublings (last step {delta:.3g})")


def canonical_height_estimate(Q: CurvePoint, tol: float = 1e-6, normalization: Optional[str] = None,
                              n_max: Optional[int] = None, digit_budget: Optional[int] = None,
                              method: Optional[str] = None) -> HeightEstimate:
    if tol < 1e-8:
        raise DomainError("tol must be >= 1e-8")
    factor = _norm_factor(normalization)
    n_max = CONFIG.n_max if n_max is None else n_max
    digit_budget = CONFIG.digit_budget if digit_budget is None else digit_budget
    if Q.is_zero():
        return HeightEstimate(0.0, 0, 0.0)
    if Q.y.is_zero():
        return HeightEstimate(0.0, 0, 0.0)
    if Q.curve.is_rational:
        return _canonical_height_Q(Q, tol, factor, n_max, digit_budget, method or "interval")
    return _canonical_height_generic(Q, tol, factor, n_max, digit_budget)


def canonical_height(Q: CurvePoint, tol: float = 1e-6, normalization: Optional[str] = None, **kw) -> float:
    """Néron-Tate height by the doubling limit.

    With the default ``x_over_2`` normalization this is half the limit of
    4^-n h_x(2^n Q).  Iteration stops once successive terms agree to tol/2
    and the tail bound B/4^n from height_difference_bound is below tol/2.
    """
    return canonical_height_estimate(Q, tol, normalization, **kw).value


def nt_pairing(P: CurvePoint, Q: CurvePoint, tol: float = 1e-6, normalization: Optional[str] = None) -> float:
    """<P,Q> = (h(P+Q) - h(P) - h(Q)) / 2."""
    hs = canonical_height(group_law(P, Q), tol, normalization)
    hp = canonical_height(P, tol, normalization)
    hq = canonical_height(Q, tol, normalization)
    # fsum is correctly rounded, so the result does not depend on argument order
    return math.fsum([hs, -hp, -hq]) / 2


@dataclass(frozen=True)
class TorsionVerdict:
    torsion: bool
    order: Optional[int] = None
    height: Optional[float] = None

    def __bool__(self):
        return self.torsion


def is_torsion(Q: CurvePoint, m_max: Optional[int] = None, tau: Optional[float] = None, tol: float = 1e-6) -> TorsionVerdict:
    """Torsion with certificate m ([m]Q = O), or non-torsion with certificate h(Q) >= tau."""
    m_max = CONFIG.torsion_m_max if m_max is None else m_max
    tau = CONFIG.torsion_tau if tau is None else tau
    P = Q
    for m in range(1, m_max + 1):
        if P.is_zero():
            return TorsionVerdict(True, m)
        P = group_law(P, Q)
    h = canonical_height(Q, tol)
    if h - tol >= tau:
        return TorsionVerdict(False, None, h)
    raise Undecided(f"no torsion order <= {m_max} and canonical height {h:.3g} below tau={tau}")


# ---------------------------------------------------------------------------
# S-integrality
# ---------------------------------------------------------------------------

def is_S_integral(Q: CurvePoint, S: PlaceSet) -> bool:
    """True iff Q = O or ord_v(x(Q)) >= 0 at every finite place outside S."""
    if Q.is_zero():
        return True
    K = Q.curve.field
    if S.field != K:
        raise FieldMismatch("place set lives over another field")
    x = Q.x
    if K.degree == 1:
        den = x.to_rational().denominator
        return all(p in S.primes for p in prime_divisors(den))
    N = x.norm()
    _, D = x.integral_parts()
    whole = {v.p for v in S if not v.certified}
    for p in prime_divisors(N.denominator, D):
        if p in whole:
            continue
        try:
            above = split_prime(K, p)
        except IndeterminateSplitting:
            raise Undecided(f"splitting of {p} is not certified")
        for v in above:
            if v not in S and ord_at(x, v) < 0:
                return False
    return True


def _s_units_squared(primes: list[int], bound: int) -> list[int]:
    """All w > 0 supported on primes with w^2 <= bound."""
    out = [1]
    for p in primes:
        new = []
        for w in out:
            q = w * p
            while q * q <= bound:
                new.append(q)
                q *= p
        out.extend(new)
    return sorted(out)


def scan_S_integral_points(E: Curve, S: PlaceSet, x_height_cap: float) -> list[CurvePoint]:
    """S-integral points with h(1:x) <= cap, one per pair ±y (y >= 0), sorted by h_x."""
    from ._kernels import square_candidates

    if not E.is_rational:
        raise DomainError("the scanner works over Q")
    if x_height_cap < 0:
        raise DomainError("cap must be nonnegative")
    if x_height_cap > CONFIG.scan_budget_log:
        raise BudgetExceeded(f"cap {x_height_cap} exceeds the scan budget {CONFIG.scan_budget_log}")
    A, B = E.A.to_rational(), E.B.to_rational()
    if A.denominator != 1 or B.denominator != 1:
        raise DomainError("the scanner needs an integral model")
    A, B = int(A), int(B)
    bound = math.floor(math.exp(x_height_cap) * (1 + 1e-12))
    found = {}
    for w in _s_units_squared(S.primes, bound):
        w2 = w * w
        for u in square_candidates(A, B, w, bound):
            u = int(u)
            if math.gcd(u, w) != 1:
                continue
            x = Fraction(u, w2)
            if max(abs(x.numerator), x.denominator) > bound:
                continue
            num = u ** 3 + A * u * w2 * w2 + B * w2 ** 3
            if num < 0:
                continue
            r = math.isqrt(num)
            if r * r != num:
                continue
            y = Fraction(r, w2 * w)
            found[x] = E.point(x, y)
    pts = list(found.values())
    pts.sort(key=lambda P: (h_x(P), P.x.to_rational(), P.y.to_rational()))
    return pts


def parse_curve(text: str) -> Curve:
    return Curve.parse(text)
