"""Integer helpers: budgeted factorization and valuations."""
from __future__ import annotations

import math
from fractions import Fraction

from sympy import factorint as _sympy_factorint

from .errors import FactorizationTooLarge

# integers above this many bits are not factored; callers must pre-factor
FACTOR_BUDGET_BITS = 63


def set_factor_budget(bits: int) -> None:
    global FACTOR_BUDGET_BITS
    if bits <= 0:
        raise ValueError("budget must be positive")
    FACTOR_BUDGET_BITS = int(bits)


def factor_int(n: int, budget_bits: int | None = None) -> dict[int, int]:
    """Prime factorization of |n| (trial division, Pollard rho) within the bit budget."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    budget = FACTOR_BUDGET_BITS if budget_bits is None else budget_bits
    if n.bit_length() > budget:
        raise FactorizationTooLarge(f"{n.bit_length()}-bit integer exceeds {budget}-bit factoring budget")
    if n == 1:
        return {}
    return {int(p): int(e) for p, e in _sympy_factorint(n).items()}


def prime_divisors(*values: int, budget_bits: int | None = None) -> list[int]:
    primes: set[int] = set()
    for v in values:
        v = abs(int(v))
        if v > 1:
            primes.update(factor_int(v, budget_bits))
    return sorted(primes)


def valuation(n, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    n = abs(int(n))
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_prime(n: int) -> bool:
    n = int(n)
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
