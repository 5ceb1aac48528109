"""Finite places of a number field.

A prime p splits in K = Q(theta) according to the factorization of the
minimal polynomial of theta modulo p, provided p does not divide the index
[O_K : Z[theta]].  Dedekind's criterion certifies this; when it fails for the
field generator we retry with a few other integral generators before giving
up with IndeterminateSplitting.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.factortools import dup_zz_hensel_lift
from sympy.polys.galoistools import gf_factor, gf_from_int_poly, gf_gcd, gf_pow

from .arith import is_prime, valuation, prime_divisors
from .errors import DomainError, IndeterminateSplitting, ZeroArgument
from .exactnum import QQ, AlgebraicNumber, NumberField, det_exact, int_mult_matrix, poly_mul, poly_sub, solve_exact

# how many alternative generators to try before declaring a prime indeterminate
ALT_GENERATOR_LIMIT = 400


@dataclass(frozen=True)
class FinitePlace:
    """A prime ideal of O_K above p, described by a local factor of the minimal
    polynomial of ``generator`` (None means the field generator t)."""

    field: NumberField
    p: int
    local_factor: tuple[int, ...]  # monic, low-to-high, residues mod p
    e: int
    f: int
    generator: Optional[AlgebraicNumber] = None
    certified: bool = True

    @property
    def norm(self) -> int:
        return self.p ** self.f

    @property
    def log_norm(self) -> float:
        return self.f * math.log(self.p)

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "f": self.f, "factor": list(self.local_factor)}

    def __repr__(self):
        tag = "" if self.certified else ", uncertified"
        return f"FinitePlace(p={self.p}, e={self.e}, f={self.f}, factor={list(self.local_factor)}{tag})"


@dataclass(frozen=True)
class PlaceSet:
    field: NumberField
    places: tuple[FinitePlace, ...] = ()

    def __post_init__(self):
        seen = []
        for v in self.places:
            if v.field != self.field:
                raise DomainError("all places must belong to the same field")
            if v not in seen:
                seen.append(v)
        object.__setattr__(self, "places", tuple(seen))

    def __iter__(self):
        return iter(self.places)

    def __len__(self):
        return len(self.places)

    def __contains__(self, v):
        return v in self.places

    @property
    def primes(self) -> list[int]:
        return sorted({v.p for v in self.places})

    @property
    def certified(self) -> bool:
        return all(v.certified for v in self.places)

    def sigma(self) -> float:
        return sigma_S(self)

    def union(self, other: "PlaceSet") -> "PlaceSet":
        if other.field != self.field:
            raise DomainError("cannot merge place sets over different fields")
        return PlaceSet(self.field, self.places + other.places)

    def to_json(self) -> list[dict]:
        return [v.to_json() for v in self.places]

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_primes(cls, K: NumberField, primes: Iterable[int], worst_case: bool = False) -> "PlaceSet":
        """All places of K above the given rational primes."""
        places = []
        for p in sorted(set(int(q) for q in primes)):
            places.extend(_split_or_worst(K, p, worst_case))
        return cls(K, tuple(places))


# ---------------------------------------------------------------------------
# polynomial plumbing (sympy's galoistools uses high-to-low lists)
# ---------------------------------------------------------------------------

def _hl(poly_lh: Sequence[int]) -> list[int]:
    return [int(c) for c in reversed(poly_lh)]


def _lh(poly_hl: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(c) for c in reversed(poly_hl))


def _factor_mod_p(m: tuple[int, ...], p: int) -> list[tuple[list[int], int]]:
    _, facs = gf_factor(gf_from_int_poly(_hl(m), p), p, ZZ)
    facs = [([int(c) for c in g], int(e)) for g, e in facs]
    facs.sort(key=lambda ge: (len(ge[0]), ge[0], ge[1]))
    return facs


def _dedekind_ok(m: tuple[int, ...], facs, p: int) -> bool:
    """Dedekind's criterion: True iff p does not divide [O_K : Z[theta]]."""
    if all(e == 1 for _, e in facs):
        return True
    # lift each factor with coefficients in [0, p) and multiply over Z
    prod = (1,)
    for g, e in facs:
        for _ in range(e):
            prod = poly_mul(prod, _lh(g))
    diff = poly_sub(m, prod)
    assert all(int(c) % p == 0 for c in diff)
    F = gf_from_int_poly(_hl([int(c) // p for c in diff]), p)
    for g, e in facs:
        if e >= 2:
            if not F:
                return False
            if len(gf_gcd(F, g, p, ZZ)) > 1:
                return False
    return True


def _integral_minpoly(theta: AlgebraicNumber) -> Optional[tuple[int, ...]]:
    """Integer minimal polynomial of theta if theta is an integral primitive element."""
    cp = theta.charpoly()
    if any(c.denominator != 1 for c in cp):
        return None
    ints = tuple(int(c) for c in cp)
    if len(ints) > 2:
        from .exactnum import poly_deriv, poly_gcd
        if len(poly_gcd(cp, poly_deriv(cp))) > 1:
            return None
    return ints


@lru_cache(maxsize=512)
def _power_traces(m: tuple[int, ...]) -> tuple[int, ...]:
    """tr(t^i) for i < deg m."""
    d = len(m) - 1
    out = []
    for i in range(d):
        mat = int_mult_matrix((0,) * i + (1,), m)
        out.append(sum(mat[j][j] for j in range(d)))
    return tuple(out)


def _candidate_generators(K: NumberField, p: int):
    """Integral elements of K outside Z[t], of the shape t + u/p."""
    d = K.degree
    t = K.gen
    traces = _power_traces(K.min_poly)
    count = 0
    for coeffs in itertools.product(range(p), repeat=d):
        if not any(coeffs):
            continue
        # an integral u/p has an integral trace
        if sum(c * s for c, s in zip(coeffs, traces)) % p:
            continue
        u = K([Fraction(c, p) for c in coeffs])
        for theta in (u, t + u):
            yield theta
            count += 1
            if count >= ALT_GENERATOR_LIMIT:
                return


def _places_from(K, p, m, facs, generator) -> list[FinitePlace]:
    return [
        FinitePlace(K, p, _lh(g), e, len(g) - 1, generator, True)
        for g, e in facs
    ]


@lru_cache(maxsize=2048)
def _split_cached(K: NumberField, p: int, generators: tuple) -> tuple[FinitePlace, ...]:
    if K.degree == 1:
        return (FinitePlace(K, p, (0, 1), 1, 1, None, True),)
    m = K.min_poly
    facs = _factor_mod_p(m, p)
    if K.poly_disc % p != 0 or _dedekind_ok(m, facs, p):
        return tuple(_places_from(K, p, m, facs, None))
    tried = list(generators)
    for theta in itertools.chain(tried, _candidate_generators(K, p)):
        mt = _integral_minpoly(theta)
        if mt is None or len(mt) - 1 != K.degree:
            continue
        facs_t = _factor_mod_p(mt, p)
        if _dedekind_ok(mt, facs_t, p):
            return tuple(_places_from(K, p, mt, facs_t, theta))
    raise IndeterminateSplitting(p)


def split_prime(K: NumberField, p: int, generators: Sequence[AlgebraicNumber] = ()) -> list[FinitePlace]:
    """Places of K above the rational prime p, sorted by (f, factor)."""
    p = int(p)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return list(_split_cached(K, p, tuple(generators)))


def worst_case_place(K: NumberField, p: int) -> FinitePlace:
    """Stand-in for an undetermined prime: one place with f = deg, an upper bound for its Σ contribution."""
    return FinitePlace(K, p, (), 1, K.degree, None, False)


def _split_or_worst(K, p, worst_case: bool, generators=()):
    try:
        return split_prime(K, p, generators)
    except IndeterminateSplitting:
        if not worst_case:
            raise
        return [worst_case_place(K, p)]


# ---------------------------------------------------------------------------
# valuations
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def _lifted_factor(m: tuple[int, ...], p: int, factor: tuple[int, ...], precision: int) -> tuple[int, ...]:
    """The p-adic factor of m lying over factor^e, modulo p**precision."""
    facs = _factor_mod_p(m, p)
    if len(facs) == 1:
        return m
    parts = [gf_pow(g, e, p, ZZ) for g, e in facs]
    lifted = dup_zz_hensel_lift(ZZ(p), [ZZ(c) for c in _hl(m)], [[ZZ(c) for c in q] for q in parts], precision, ZZ)
    for (g, _), G in zip(facs, lifted):
        if _lh(g) == factor:
            return _lh([int(c) for c in G])
    raise DomainError("local factor not found in factorization")


def _in_generator_basis(a: AlgebraicNumber, theta: AlgebraicNumber) -> list[Fraction]:
    d = a.field.degree
    cols = []
    power = a.field.one()
    for _ in range(d):
        cols.append(power.coords)
        power = power * theta
    mat = [[cols[j][i] for j in range(d)] for i in range(d)]
    return list(solve_exact(mat, list(a.coords)))


def _resultant_monic(G: tuple[int, ...], A: Sequence[int]) -> int:
    """Res(G, A) = det of multiplication by A on Z[t]/(G), G monic."""
    n = len(G) - 1
    if n == 0:
        return 1

    def reduce(poly):
        poly = list(poly)
        for k in range(len(poly) - 1, n - 1, -1):
            c = poly[k]
            if c:
                for i in range(n + 1):
                    poly[k - n + i] -= c * G[i]
        return (poly + [0] * n)[:n]

    cols = []
    cur = reduce(list(A))
    for j in range(n):
        cols.append(cur)
        cur = reduce([0] + cur)
    mat = [[cols[j][i] for j in range(n)] for i in range(n)]
    return int(det_exact(mat))


def ord_at(a, v: FinitePlace) -> int:
    """ord_v(a), normalized so that ord_v(p) = e."""
    if not isinstance(a, AlgebraicNumber):
        a = v.field(a)
    if a.field != v.field:
        raise DomainError("element and place belong to different fields")
    if a.is_zero():
        raise ZeroArgument("ord of 0 is undefined")
    if not v.certified:
        raise IndeterminateSplitting(v.p)
    p = v.p
    K = v.field
    if K.degree == 1:
        return valuation(a.to_rational(), p)
    if v.generator is None:
        coords = list(a.coords)
        m = K.min_poly
    else:
        coords = _in_generator_basis(a, v.generator)
        m = _integral_minpoly(v.generator)
    den = 1
    for c in coords:
        den = den * c.denominator // math.gcd(den, c.denominator)
    A = [int(c * den) for c in coords]
    vd = valuation(den, p)
    # N(A(theta)) = N(a) * den^d; its p-part bounds every local valuation
    k = valuation(a.norm(), p) + K.degree * vd
    if k == 0:
        return -v.e * vd
    G = _lifted_factor(m, p, v.local_factor, k + 1)
    r = _resultant_monic(G, A)
    modulus = p ** (k + 1)
    r %= modulus
    if r == 0:
        raise DomainError("resultant vanished modulo the working precision")
    vr = valuation(r, p)
    if vr % v.f:
        raise DomainError("inconsistent local valuation")
    return vr // v.f - v.e * vd


# ---------------------------------------------------------------------------
# Σ_S and lifting
# ---------------------------------------------------------------------------

SIGMA_ABS_ERROR_PER_PLACE = 2.0 ** -40


def sigma_S(S) -> float:
    """Σ_{v in S} log N(v) = Σ f log p.  Absolute error <= 2^-40 per place."""
    places = S.places if isinstance(S, PlaceSet) else list(S)
    return math.fsum(v.f * math.log(v.p) for v in places)


def lift_places(S: PlaceSet, L: NumberField, embedding: Optional[AlgebraicNumber] = None,
                worst_case: bool = False, generators: Sequence[AlgebraicNumber] = ()) -> PlaceSet:
    """Places of L above the places in S.

    ``embedding`` is the image in L of the generator of S.field; it may be
    omitted when S lives over Q.  With ``worst_case`` an undetermined prime is
    replaced by a single uncertified place with f = [L:Q].
    """
    K = S.field
    if L.degree % K.degree:
        raise DomainError("degree of L is not a multiple of the degree of K")
    rel = L.degree // K.degree
    if not len(S):
        return PlaceSet(L, ())
    out: list[FinitePlace] = []
    if K.degree == 1:
        for p in S.primes:
            out.extend(_split_or_worst(L, p, worst_case, tuple(generators)))
    else:
        if embedding is None:
            raise DomainError("an embedding of the base generator into L is required")
        if embedding.field != L:
            raise DomainError("embedding must be an element of L")
        for v in S:
            above = _split_or_worst(L, v.p, worst_case, tuple(generators))
            if not v.certified:
                out.extend(above)
                continue
            theta_img = embedding if v.generator is None else _image(v.generator, embedding)
            # v = (p, g(theta)); w | v iff ord_w(g(theta)) > 0
            g = v.local_factor
            u = L.zero()
            power = L.one()
            for c in g:
                u = u + power * c
                power = power * theta_img
            for w in above:
                if not w.certified:
                    out.append(w)
                elif u.is_zero() or ord_at(u, w) > 0:
                    out.append(w)
    lifted = PlaceSet(L, tuple(out))
    if sigma_S(lifted) > rel * sigma_S(S) + 1e-9 * (1 + len(out)):
        if lifted.certified and S.certified:
            raise DomainError("lifted Σ exceeds [L:K]·Σ_S")
    return lifted


def _image(x: AlgebraicNumber, theta_img: AlgebraicNumber) -> AlgebraicNumber:
    L = theta_img.field
    out = L.zero()
    power = L.one()
    for c in x.coords:
        out = out + power * c
        power = power * theta_img
    return out


def dedekind_hensel_bound(sigma_S: float, rel_degree: int, logD_K: float) -> float:
    """Upper bound Σ_S + [L:K](log D_K + 1.26) for log D_L."""
    if rel_degree < 1:
        raise DomainError("relative degree must be >= 1")
    if sigma_S < 0 or logD_K < 0:
        raise DomainError("inputs must be nonnegative")
    return sigma_S + rel_degree * (logD_K + 1.26)


def places_dividing(a: AlgebraicNumber, extra_primes: Iterable[int] = (), worst_case: bool = False) -> list[FinitePlace]:
    """Places v with ord_v(a) possibly nonzero: those above primes of the norm or the denominator."""
    K = a.field
    if a.is_zero():
        raise ZeroArgument("0 has support at every place")
    N = a.norm()
    _, D = a.integral_parts()
    primes = set(prime_divisors(N.numerator, N.denominator, D))
    primes.update(extra_primes)
    out = []
    for p in sorted(primes):
        out.extend(_split_or_worst(K, p, worst_case))
    return out
