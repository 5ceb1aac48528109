"""Brute-force arithmetic oracles: naive factorization, radicals and exact doubling heights."""
from __future__ import annotations

import math
from fractions import Fraction


def naive_factor(n: int) -> dict[int, int]:
    """Trial division by every integer 2, 3, 4, ... up to sqrt(n)."""
    n = abs(n)
    out: dict[int, int] = {}
    q = 2
    while q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def ord_p(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def radical_oracle(a: int, b: int, c: int) -> tuple[list[int], float]:
    """Primes where the ords of (a, b, c) are not all equal, after scaling to coprime integers."""
    g = math.gcd(math.gcd(a, b), c)
    a, b, c = a // g, b // g, c // g
    candidates = set()
    for n in (a, b, c):
        candidates |= set(naive_factor(n))
    S = sorted(p for p in candidates if len({ord_p(a, p), ord_p(b, p), ord_p(c, p)}) > 1)
    return S, math.fsum(math.log(p) for p in S)


def double_point(x: Fraction, y: Fraction, A: Fraction) -> tuple[Fraction, Fraction]:
    lam = (3 * x * x + A) / (2 * y)
    x2 = lam * lam - 2 * x
    return x2, lam * (x - x2) - y


def doubling_height(x, y, A, n: int) -> float:
    """h_x(2^n Q) / (2 * 4^n) computed in exact rationals (x_over_2 normalization)."""
    x, y, A = Fraction(x), Fraction(y), Fraction(A)
    for _ in range(n):
        x, y = double_point(x, y, A)
    num, den = abs(x.numerator), x.denominator
    big = max(num, den)
    # log of a huge integer via its bit length
    shift = max(0, big.bit_length() - 64)
    logh = math.log(big >> shift) + shift * math.log(2)
    return logh / (2 * 4 ** n)
