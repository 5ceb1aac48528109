"""Exact scalars: rationals and elements of Q[t]/(m(t)).

Polynomials are tuples of coefficients, low degree first.  Field elements
carry their coordinates on the power basis 1, t, ..., t^(d-1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence, Union

import mpmath
from sympy import Poly, Symbol

from .errors import (
    DivisionByZero,
    DomainError,
    FieldMismatch,
    PrecisionUnreachable,
    ReduciblePolynomial,
)

Rational = Fraction
Scalar = Union[int, Fraction, "AlgebraicNumber"]

MAX_DEGREE = 8
_T = Symbol("t")


# ---------------------------------------------------------------------------
# rationals
# ---------------------------------------------------------------------------

def parse_rational(s: Union[str, int, Fraction]) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a decimal string into a Fraction."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    return Fraction(str(s).strip())


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# dense polynomials over Q (low-to-high tuples)
# ---------------------------------------------------------------------------

def _trim(p: Sequence) -> tuple:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_add(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def poly_scale(a, c):
    return _trim([c * x for x in a])


def poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def poly_divmod(a, b):
    """Quotient and remainder over Q."""
    b = _trim(b)
    if not b:
        raise DivisionByZero("polynomial division by zero")
    a = [Fraction(x) for x in _trim(a)]
    lb = Fraction(b[-1])
    db = len(b) - 1
    if len(a) - 1 < db:
        return (), tuple(a)
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k] / lb
        if c:
            q[k - db] = c
            for j in range(db + 1):
                a[k - db + j] -= c * b[j]
    return _trim(q), _trim(a[:db])


def poly_monic(a):
    a = _trim(a)
    if not a:
        return a
    lc = Fraction(a[-1])
    return tuple(Fraction(x) / lc for x in a)


def poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return poly_monic(a)


def poly_gcdex(a, b):
    """Return (s, t, g) with s*a + t*b = g = monic gcd(a, b)."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    lc = Fraction(r0[-1])
    return poly_scale(s0, 1 / lc), poly_scale(t0, 1 / lc), poly_monic(r0)


def poly_deriv(a):
    return _trim([i * a[i] for i in range(1, len(a))])


def poly_eval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_sqf_part(a):
    """Monic squarefree part of a over Q."""
    a = _trim(a)
    g = poly_gcd(a, poly_deriv(a))
    return poly_monic(poly_divmod(a, g)[0])


def primitive_integer_poly(a) -> tuple[int, ...]:
    """Scale a rational polynomial to a primitive integral one with positive leading coefficient."""
    a = [Fraction(x) for x in _trim(a)]
    den = 1
    for x in a:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    if ints[-1] < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def _to_sympy(p) -> Poly:
    return Poly(list(reversed(p)), _T, domain="QQ")


def poly_factor_rational(p) -> list[tuple[tuple[Fraction, ...], int]]:
    """Monic irreducible factors over Q with multiplicities, in a deterministic order."""
    _, facs = _to_sympy(poly_monic(p)).factor_list()
    out = []
    for f, e in facs:
        coeffs = tuple(Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs()))
        out.append((poly_monic(coeffs), e))
    out.sort(key=lambda fe: (len(fe[0]), [(abs(c), c < 0) for c in reversed(fe[0])], fe[1]))
    return out


def poly_discriminant(p) -> Fraction:
    d = _to_sympy(p).discriminant()
    return Fraction(int(d.p), int(d.q))


def _int_charpoly(b: Sequence[Sequence[int]]) -> list[int]:
    """Faddeev-LeVerrier on an integer matrix; every division is exact."""
    n = len(b)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = B M_{k-1} + c_{n-k+1} I
        prod = [[sum(b[i][l] * mk[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            prod[i][i] += coeffs[n - k + 1]
        mk = prod
        tr = sum(sum(b[i][l] * mk[l][i] for l in range(n)) for i in range(n))
        coeffs[n - k] = -tr // k
    return coeffs


def _scaled_charpoly(int_coeffs: Sequence[int], den: int) -> tuple[Fraction, ...]:
    n = len(int_coeffs) - 1
    return tuple(Fraction(int_coeffs[i], den ** (n - i)) for i in range(n + 1))


def charpoly(mat: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    """Characteristic polynomial det(tI - M), monic.

    The matrix is scaled to integers first so the recurrence runs on ints.
    """
    a = [[Fraction(x) for x in row] for row in mat]
    den = 1
    for row in a:
        for x in row:
            den = den * x.denominator // math.gcd(den, x.denominator)
    b = [[int(x * den) for x in row] for row in a]
    return _scaled_charpoly(_int_charpoly(b), den)


def int_mult_matrix(A: Sequence[int], m: Sequence[int]) -> list[list[int]]:
    """Matrix of multiplication by A(t) on Z[t]/(m), m monic integral, power basis."""
    d = len(m) - 1
    col = list(A) + [0] * (d - len(A))
    cols = []
    for j in range(d):
        cols.append(col)
        if j + 1 < d:
            top = col[-1]
            col = [0] + col[:-1]
            if top:
                col = [col[i] - top * m[i] for i in range(d)]
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def det_exact(mat: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination (entries coerced to Fraction)."""
    n = len(mat)
    if n == 0:
        return Fraction(1)
    m = [[Fraction(x) for x in row] for row in mat]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def solve_exact(mat, rhs):
    """Solve M x = rhs exactly over Q (M square, invertible)."""
    n = len(mat)
    aug = [[Fraction(x) for x in mat[i]] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise DomainError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col] / pv
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


# ---------------------------------------------------------------------------
# certified complex root disks
# ---------------------------------------------------------------------------

def _sqrt_bounds(q: Fraction, bits: int = 80) -> tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(q) <= hi, relative gap about 2**-bits."""
    q = Fraction(q)
    if q < 0:
        raise DomainError("sqrt of negative")
    if q == 0:
        return Fraction(0), Fraction(0)
    mag = (q.numerator.bit_length() - q.denominator.bit_length()) // 2
    s = bits - mag
    scale = Fraction(4) ** s if s >= 0 else Fraction(1, 4 ** (-s))
    x = q * scale
    n_lo = x.numerator // x.denominator
    lo_i = math.isqrt(n_lo)
    n_hi = -((-x.numerator) // x.denominator)
    hi_i = math.isqrt(n_hi)
    if hi_i * hi_i < n_hi:
        hi_i += 1
    root_scale = Fraction(2) ** s if s >= 0 else Fraction(1, 2 ** (-s))
    return Fraction(lo_i) / root_scale, Fraction(hi_i) / root_scale


@dataclass(frozen=True)
class Disk:
    """Closed disk in C with rational center and radius."""

    re: Fraction
    im: Fraction
    radius: Fraction

    @property
    def width(self) -> Fraction:
        return 2 * self.radius

    def approx(self) -> complex:
        return complex(float(self.re), float(self.im))

    def abs_bounds(self, bits: int = 80) -> tuple[Fraction, Fraction]:
        lo, hi = _sqrt_bounds(self.re * self.re + self.im * self.im, bits)
        return max(Fraction(0), lo - self.radius), hi + self.radius

    def contains(self, z) -> bool:
        if isinstance(z, Disk):
            # z contained entirely
            d2 = (self.re - z.re) ** 2 + (self.im - z.im) ** 2
            if z.radius > self.radius:
                return False
            return d2 <= (self.radius - z.radius) ** 2
        if isinstance(z, complex):
            zr, zi = Fraction(z.real), Fraction(z.imag)
        else:
            zr, zi = Fraction(z), Fraction(0)
        return (self.re - zr) ** 2 + (self.im - zi) ** 2 <= self.radius ** 2

    def __mul__(self, other: "Disk") -> "Disk":
        _, a1 = self.abs_bounds()
        _, a2 = other.abs_bounds()
        a1 -= self.radius
        a2 -= other.radius
        return Disk(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
            a1 * other.radius + a2 * self.radius + self.radius * other.radius,
        )


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = x._mpf_
    man = -int(man) if sign else int(man)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** (-exp))


def _cpoly_eval(coeffs, re: Fraction, im: Fraction):
    ar, ai = Fraction(0), Fraction(0)
    for c in reversed(coeffs):
        ar, ai = ar * re - ai * im + c, ar * im + ai * re
    return ar, ai


def certified_roots(coeffs: Sequence[int], precision_bits: int = 64) -> list[Disk]:
    """Disjoint disks of width <= 2**-precision_bits, one around each root.

    ``coeffs`` is a squarefree polynomial with rational coefficients
    (low-to-high).  Inclusion uses the bound |z - root| <= n |p(z)/p'(z)|,
    evaluated in exact rational arithmetic.
    """
    p = [Fraction(c) for c in _trim(coeffs)]
    n = len(p) - 1
    if n < 1:
        return []
    if n == 1:
        r = -p[0] / p[1]
        return [Disk(r, Fraction(0), Fraction(0))]
    dp = poly_deriv(p)
    target = Fraction(1, 2 ** precision_bits)
    size_bits = max(abs(c.numerator).bit_length() + c.denominator.bit_length() for c in p)
    work = precision_bits + size_bits + 32
    for _ in range(7):
        with mpmath.workprec(work):
            try:
                raw = mpmath.polyroots(
                    [mpmath.mpf(c.numerator) / c.denominator for c in reversed(p)],
                    maxsteps=50 + 4 * n + work // 8,
                    extraprec=work,
                )
            except mpmath.libmp.NoConvergence:
                work *= 2
                continue
            approx = []
            for z in raw:
                z = mpmath.mpc(z)
                approx.append((_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag)))
        disks = []
        ok = True
        for zr, zi in approx:
            pr, pi = _cpoly_eval(p, zr, zi)
            qr, qi = _cpoly_eval(dp, zr, zi)
            den = qr * qr + qi * qi
            if den == 0:
                ok = False
                break
            _, rad = _sqrt_bounds(n * n * (pr * pr + pi * pi) / den, 40)
            if 2 * rad > target:
                ok = False
                break
            disks.append(Disk(zr, zi, rad))
        if ok:
            for i in range(n):
                for j in range(i + 1, n):
                    a, b = disks[i], disks[j]
                    d2 = (a.re - b.re) ** 2 + (a.im - b.im) ** 2
                    if d2 <= (a.radius + b.radius) ** 2:
                        ok = False
            if ok:
                disks.sort(key=lambda d: (d.re, d.im))
                return disks
        work *= 2
    raise PrecisionUnreachable(f"could not certify roots of {tuple(coeffs)} to {precision_bits} bits")


# ---------------------------------------------------------------------------
# number fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumberField:
    """Q[t]/(m(t)) for a monic irreducible integral m of degree <= 8."""

    min_poly: tuple[int, ...]

    def __post_init__(self):
        if any(Fraction(c).denominator != 1 for c in self.min_poly):
            raise DomainError("minimal polynomial must have integer coefficients")
        m = tuple(int(c) for c in _trim(self.min_poly))
        object.__setattr__(self, "min_poly", m)
        if len(m) < 2:
            raise DomainError("minimal polynomial must have degree >= 1")
        if m[-1] != 1:
            raise DomainError("minimal polynomial must be monic")
        if len(m) - 1 > MAX_DEGREE:
            raise DomainError(f"degree {len(m) - 1} exceeds cap {MAX_DEGREE}")
        if len(m) > 2 and not _is_irreducible(m):
            raise ReduciblePolynomial(f"{m} is reducible over Q")

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @cached_property
    def poly_disc(self) -> int:
        if self.degree == 1:
            return 1
        return int(poly_discriminant(self.min_poly))

    @cached_property
    def _reduction(self) -> list[tuple[Fraction, ...]]:
        # t^k mod m for k = d .. 2d-2
        d = self.degree
        red = []
        cur = [Fraction(-c) for c in self.min_poly[:d]]  # t^d
        for _ in range(max(d - 1, 1)):
            red.append(tuple(cur))
            top = cur[-1]
            cur = [Fraction(0)] + cur[:-1]
            if top:
                cur = [cur[i] - top * self.min_poly[i] for i in range(d)]
        return red

    def reduce(self, poly) -> tuple[Fraction, ...]:
        d = self.degree
        out = [Fraction(0)] * d
        for i, c in enumerate(poly):
            if not c:
                continue
            if i < d:
                out[i] += c
            elif i - d < len(self._reduction):
                row = self._reduction[i - d]
                for j in range(d):
                    out[j] += c * row[j]
            else:
                _, r = poly_divmod(poly, self.min_poly)
                return tuple(list(Fraction(x) for x in r) + [Fraction(0)] * (d - len(r)))
        return tuple(out)

    def __call__(self, value) -> "AlgebraicNumber":
        """Coerce an int, Fraction, coefficient list or AlgebraicNumber into this field."""
        if isinstance(value, AlgebraicNumber):
            if value.field != self:
                raise FieldMismatch("element belongs to another field")
            return value
        if isinstance(value, (int, Fraction)):
            return AlgebraicNumber(self, (Fraction(value),) + (Fraction(0),) * (self.degree - 1))
        if isinstance(value, str):
            return self(parse_rational(value))
        coeffs = [parse_rational(c) for c in value]
        return AlgebraicNumber(self, self.reduce(coeffs))

    @property
    def gen(self) -> "AlgebraicNumber":
        if self.degree == 1:
            return self(-Fraction(self.min_poly[0]))
        return self([0, 1])

    def one(self):
        return self(1)

    def zero(self):
        return self(0)

    def roots(self, precision_bits: int = 64) -> list[Disk]:
        return _field_roots(self.min_poly, precision_bits)

    def __repr__(self):
        return f"NumberField({list(self.min_poly)})"


@lru_cache(maxsize=4096)
def _is_irreducible(m: tuple[int, ...]) -> bool:
    return Poly(list(reversed(m)), _T, domain="ZZ").is_irreducible


@lru_cache(maxsize=512)
def _field_roots(m: tuple[int, ...], precision_bits: int) -> list[Disk]:
    return certified_roots(m, precision_bits)


QQ = NumberField((0, 1))


def _coerce(x, field: NumberField) -> "AlgebraicNumber":
    if isinstance(x, AlgebraicNumber):
        if x.field != field:
            raise FieldMismatch(f"{x.field} vs {field}")
        return x
    if isinstance(x, (int, Fraction)):
        return field(x)
    return NotImplemented


class AlgebraicNumber:
    """Immutable element of a NumberField."""

    __slots__ = ("field", "coords", "_hash")

    def __init__(self, field: NumberField, coords: Iterable):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != field.degree:
            raise DomainError("coordinate vector has wrong length")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("AlgebraicNumber is immutable")

    # -- basic predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("element is not rational")
        return self.coords[0]

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, AlgebraicNumber):
            return self.field == other.field and self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.coords[0]) if self.is_rational() else hash((self.field, self.coords))
            object.__setattr__(self, "_hash", h)
        return h

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self):
        return AlgebraicNumber(self.field, tuple(-c for c in self.coords))

    def __add__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return other
        return AlgebraicNumber(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return other
        return AlgebraicNumber(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AlgebraicNumber(self.field, tuple(a * other for a in self.coords))
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return other
        if self.field.degree == 1:
            return AlgebraicNumber(self.field, (self.coords[0] * other.coords[0],))
        if other.is_rational():
            return self * other.coords[0]
        if self.is_rational():
            return other * self.coords[0]
        return AlgebraicNumber(self.field, self.field.reduce(poly_mul(self.coords, other.coords)))

    __rmul__ = __mul__

    def inverse(self) -> "AlgebraicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return self.field(1 / self.coords[0])
        s, _, g = poly_gcdex(_trim(self.coords), self.field.min_poly)
        # g is a nonzero constant because m is irreducible
        return AlgebraicNumber(self.field, self.field.reduce(poly_scale(s, 1 / g[0])))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return AlgebraicNumber(self.field, tuple(a / other for a in self.coords))
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other, self.field)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- linear algebra -----------------------------------------------------
    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of x -> self*x on the power basis (columns are images of t^j)."""
        d = self.field.degree
        cols = []
        cur = self
        t = self.field([0, 1]) if d > 1 else None
        for j in range(d):
            cols.append(cur.coords)
            if j + 1 < d:
                cur = cur * t
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def charpoly(self) -> tuple[Fraction, ...]:
        if self.field.degree == 1:
            return (-self.coords[0], Fraction(1))
        A, den = self.integral_parts()
        return _scaled_charpoly(_int_charpoly(int_mult_matrix(A, self.field.min_poly)), den)

    def norm(self) -> Fraction:
        cp = self.charpoly()
        d = self.field.degree
        return cp[0] * (-1) ** d

    def trace(self) -> Fraction:
        return -self.charpoly()[-2]

    def minpoly(self) -> tuple[Fraction, ...]:
        return poly_sqf_part(self.charpoly())

    def as_poly(self) -> tuple[Fraction, ...]:
        return _trim(self.coords)

    def integral_parts(self) -> tuple[tuple[int, ...], int]:
        """(A, D) with self = A(t)/D, A integral, D > 0 minimal."""
        den = 1
        for c in self.coords:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return tuple(int(c * den) for c in self.coords), den

    def embeddings(self, precision_bits: int = 64) -> list[Disk]:
        return embed_real_intervals(self, precision_bits)

    def __repr__(self):
        if self.field.degree == 1:
            return f"AlgebraicNumber({self.coords[0]})"
        terms = []
        for i, c in enumerate(self.coords):
            if c:
                terms.append(f"{c}" if i == 0 else f"({c})*t^{i}")
        return "AlgebraicNumber(" + (" + ".join(terms) or "0") + f" mod {list(self.field.min_poly)})"

    def __str__(self):
        if self.is_rational():
            return str(self.coords[0])
        return "[" + ",".join(str(c) for c in self.coords) + "]"


def field_arith(a: AlgebraicNumber, b: AlgebraicNumber, op: str) -> AlgebraicNumber:
    if a.field != b.field:
        raise FieldMismatch("operands live in different fields")
    if op == "+":
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise DomainError(f"unknown operation {op!r}")


def norm_and_minpoly(a: AlgebraicNumber) -> tuple[Fraction, tuple[Fraction, ...]]:
    return a.norm(), a.minpoly()


def _poly_abs_sum_bound(coords, zabs: Fraction, rho: Fraction) -> Fraction:
    """Upper bound on |a(z) - a(w)| for |z| <= zabs, |z - w| <= rho."""
    bound = Fraction(0)
    base = zabs + rho
    for j in range(1, len(coords)):
        if coords[j]:
            bound += abs(coords[j]) * j * base ** (j - 1) * rho
    return bound


def embed_real_intervals(a: AlgebraicNumber, precision_bits: int = 64) -> list[Disk]:
    """One certified disk per root of m containing sigma(a), width <= 2**-precision_bits."""
    if precision_bits < 32:
        raise DomainError("precision_bits must be >= 32")
    field = a.field
    if a.is_rational():
        r = a.coords[0]
        return [Disk(r, Fraction(0), Fraction(0)) for _ in range(field.degree)]
    target = Fraction(1, 2 ** precision_bits)
    coords = _trim(a.coords)
    extra = 8 + max(abs(c.numerator).bit_length() for c in coords if c)
    for attempt in range(6):
        bits = precision_bits + extra + 8 * field.degree
        roots = field.roots(bits)
        out = []
        ok = True
        for rd in roots:
            vr, vi = _cpoly_eval(coords, rd.re, rd.im)
            _, zabs = rd.abs_bounds()
            rad = _poly_abs_sum_bound(coords, zabs - rd.radius, rd.radius)
            if 2 * rad > target:
                ok = False
                break
            out.append(Disk(vr, vi, rad))
        if ok:
            return out
        extra = extra * 2 + 16
    raise PrecisionUnreachable("embedding refinement stalled")
