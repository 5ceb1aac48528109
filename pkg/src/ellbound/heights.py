"""Weil heights, the log+ convention and the radical of a projective point."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .arith import prime_divisors
from .errors import DomainError, NegativeInput, PrecisionUnreachable, ZeroArgument
from .exactnum import (
    QQ,
    AlgebraicNumber,
    NumberField,
    certified_roots,
    embed_real_intervals,
    primitive_integer_poly,
)
from .places import FinitePlace, PlaceSet, ord_at, sigma_S, split_prime

HEIGHT_TOLERANCE = 1e-9
# norms met in height computations are larger than radical inputs; sympy
# factors smooth numbers of this size quickly
HEIGHT_FACTOR_BUDGET_BITS = 256
# starting precision of the embedding intervals; doubled until the error budget is met
EMBEDDING_START_BITS = 64


def log_plus(x) -> float:
    """max(1, log x), with log+(0) = 1."""
    if hasattr(x, "log_value") and hasattr(x, "level"):
        # TowerReal: compare in log space
        return max(1.0, float(x.log()))
    if not isinstance(x, (int, Fraction)):
        x = float(x)
    if x < 0:
        raise NegativeInput(f"log+ undefined for {x}")
    if x == 0:
        return 1.0
    if isinstance(x, Fraction):
        lg = _log_fraction(x)
    else:
        lg = math.log(x)
    return max(1.0, lg)


def _log_fraction(q: Fraction) -> float:
    q = Fraction(q)
    return math.log(q.numerator) - math.log(q.denominator)


class ProjectivePoint:
    """(a_0 : ... : a_n) with coordinates in a number field."""

    __slots__ = ("field", "coords")

    def __init__(self, coords: Sequence, field: Optional[NumberField] = None):
        coords = list(coords)
        if field is None:
            field = next((c.field for c in coords if isinstance(c, AlgebraicNumber)), QQ)
        vals = tuple(field(c) for c in coords)
        if len(vals) < 2:
            raise DomainError("a projective point needs at least two coordinates")
        if all(c.is_zero() for c in vals):
            raise ZeroArgument("all coordinates are zero")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", vals)

    def __setattr__(self, *_):
        raise AttributeError("ProjectivePoint is immutable")

    def __len__(self):
        return len(self.coords)

    def scale(self, lam) -> "ProjectivePoint":
        lam = self.field(lam)
        if lam.is_zero():
            raise ZeroArgument("cannot scale by 0")
        return ProjectivePoint([c * lam for c in self.coords], self.field)

    def normalized(self) -> tuple[AlgebraicNumber, ...]:
        """Coordinates divided by the first nonzero one."""
        pivot = next(c for c in self.coords if not c.is_zero())
        inv = pivot.inverse()
        return tuple(c * inv for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        return self.field == other.field and len(self) == len(other) and self.normalized() == other.normalized()

    def __hash__(self):
        return hash((self.field, self.normalized()))

    def __repr__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


def _as_point(P) -> ProjectivePoint:
    if isinstance(P, ProjectivePoint):
        return P
    return ProjectivePoint(P)


def _coprime_integers(coords: Iterable[Fraction]) -> list[int]:
    coords = [Fraction(c) for c in coords]
    den = 1
    for c in coords:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in coords]
    g = 0
    for n in ints:
        g = math.gcd(g, n)
    return [n // g for n in ints]


def _support_primes(values: Iterable[AlgebraicNumber], budget_bits: Optional[int] = None) -> list[int]:
    nums = []
    for a in values:
        if a.is_zero():
            continue
        N = a.norm()
        _, D = a.integral_parts()
        nums.extend([N.numerator, N.denominator, D])
    return prime_divisors(*nums, budget_bits=budget_bits)


def _archimedean_part(coords: Sequence[AlgebraicNumber], tol: float) -> tuple[float, float]:
    """(Σ_σ log max_i |σ a_i|, error bound) over all complex embeddings."""
    K = coords[0].field
    bits = EMBEDDING_START_BITS
    nonzero = [c for c in coords if not c.is_zero()]
    for _ in range(8):
        embs = [embed_real_intervals(c, bits) for c in nonzero]
        total = []
        err = 0.0
        ok = True
        for j in range(K.degree):
            lo = max(e[j].abs_bounds(bits + 16)[0] for e in embs)
            hi = max(e[j].abs_bounds(bits + 16)[1] for e in embs)
            if lo <= 0:
                ok = False
                break
            llo, lhi = _log_fraction(lo), _log_fraction(hi)
            total.append((llo + lhi) / 2)
            err += (lhi - llo) / 2
        if ok and err <= tol:
            return math.fsum(total), err
        bits *= 2
    raise PrecisionUnreachable("archimedean height contribution could not be resolved")


def height_breakdown(P, tol: float = HEIGHT_TOLERANCE) -> dict:
    """Height with its witnesses: coprime representative over Q, local terms otherwise."""
    P = _as_point(P)
    K = P.field
    if K.degree == 1:
        ints = _coprime_integers(c.to_rational() for c in P.coords)
        return {"value": math.log(max(abs(n) for n in ints)), "error": 0.0,
                "witnesses": {"coprime_representative": ints}}
    coords = P.coords
    finite = []
    for p in _support_primes(coords, HEIGHT_FACTOR_BUDGET_BITS):
        for v in split_prime(K, p):
            m = min(ord_at(c, v) for c in coords if not c.is_zero())
            if m:
                finite.append((v, -v.f * m * math.log(p)))
    arch, err = _archimedean_part(coords, tol * K.degree / 2)
    d = K.degree
    value = (math.fsum(t for _, t in finite) + arch) / d
    return {"value": value, "error": err / d + 1e-15 * (1 + len(finite)),
            "witnesses": {"degree": d, "archimedean": arch,
                          "finite": [dict(v.to_json(), term=t) for v, t in finite]}}


def weil_height_with_error(P, tol: float = HEIGHT_TOLERANCE) -> tuple[float, float]:
    """Absolute logarithmic Weil height and an absolute error bound."""
    b = height_breakdown(P, tol)
    return b["value"], b["error"]


def weil_height(P, tol: float = HEIGHT_TOLERANCE) -> float:
    """h(a_0 : ... : a_n), summing local contributions over all places."""
    return weil_height_with_error(P, tol)[0]


def relative_height(P) -> float:
    """h_K = [K:Q] h."""
    P = _as_point(P)
    return P.field.degree * weil_height(P)


def height_x(a) -> float:
    """h(1 : a) for a field element or rational."""
    if isinstance(a, AlgebraicNumber):
        if a.is_rational():
            a = a.to_rational()
        else:
            return height_via_mahler(a)
    q = Fraction(a)
    return math.log(max(abs(q.numerator), q.denominator))


def mahler_measure(poly_int: Sequence[int], precision_bits: int = 80) -> tuple[float, float]:
    """(log M(f), error bound) for a squarefree integer polynomial."""
    lead = abs(poly_int[-1])
    total = [math.log(lead)]
    err = 0.0
    for disk in certified_roots(poly_int, precision_bits):
        lo, hi = disk.abs_bounds(precision_bits)
        if hi <= 1:
            continue
        lo = max(lo, Fraction(1))
        llo, lhi = _log_fraction(lo), _log_fraction(hi)
        total.append((llo + lhi) / 2)
        err += (lhi - llo) / 2
    return math.fsum(total), err


def height_via_mahler(a) -> float:
    """(1/deg) log M of the primitive integral minimal polynomial of a."""
    if not isinstance(a, AlgebraicNumber):
        a = QQ(a)
    if a.is_zero():
        raise ZeroArgument("height of 0 via Mahler measure is undefined")
    mp = primitive_integer_poly(a.minpoly())
    deg = len(mp) - 1
    value, _ = mahler_measure(mp)
    return value / deg


# ---------------------------------------------------------------------------
# radical
# ---------------------------------------------------------------------------

def radical(P, S_extra: Optional[PlaceSet] = None) -> tuple[float, PlaceSet]:
    """Σ_S over the places where the coordinates of P do not all share one ord."""
    P = _as_point(P)
    if len(P) != 3:
        raise DomainError("radical is defined for points of P^2")
    if any(c.is_zero() for c in P.coords):
        raise ZeroArgument("all three coordinates must be nonzero")
    K = P.field
    places: list[FinitePlace] = []
    if K.degree == 1:
        ints = _coprime_integers(c.to_rational() for c in P.coords)
        # coprime: ords differ exactly at primes dividing the product
        for p in prime_divisors(*ints):
            places.append(split_prime(K, p)[0])
    else:
        a0 = P.coords[0]
        ratios = [c / a0 for c in P.coords[1:]]
        for p in _support_primes(ratios):
            for v in split_prime(K, p):
                ords = {0} | {ord_at(r, v) for r in ratios}
                if len(ords) >= 2:
                    places.append(v)
    S = PlaceSet(K, tuple(places))
    if S_extra is not None:
        S = S.union(S_extra)
    return sigma_S(S), S
