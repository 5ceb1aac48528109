"""Term-by-term oracle for the explicit bounds.

Written directly from the displayed formulas, independently of
ellbound.bounds: each bound is formed as a product of its factors in
50-digit mpmath arithmetic (whose exponent range is unbounded) and only
then passed through log.  Returns mpf logarithms.
"""
from __future__ import annotations

import mpmath
from mpmath import mp, mpf

mp.dps = 50


def logplus(x):
    """max(1, log x), with value 1 for x <= 0."""
    x = mpf(x)
    if x <= 0:
        return mpf(1)
    return max(mpf(1), mpmath.log(x))


def log_C_EK(r, d, logV, heights, reg, gamma2):
    """log of gamma2^(r^2) r^(2r^2) d^(9r+15) (log+ d)^(r+6) (log+ log V)^(r+7) (log+ log+ log V)^2
    prod max(1, h_i) log+(Reg^-1) (log+ log Reg^-1)^2 log+ log+ log Reg^-1."""
    r, d = int(r), int(d)
    V_log = mpf(logV)  # log V itself
    reg_inv = 1 / mpf(reg)
    prod_h = mpf(1)
    for h in heights:
        prod_h *= max(mpf(1), mpf(h))
    C = (mpf(gamma2) ** (r * r)
         * mpf(r) ** (2 * r * r)
         * mpf(d) ** (9 * r + 15)
         * logplus(d) ** (r + 6)
         * logplus(V_log) ** (r + 7)
         * logplus(logplus(V_log)) ** 2
         * prod_h
         * logplus(reg_inv)
         * logplus(mpmath.log(reg_inv)) ** 2
         * logplus(logplus(mpmath.log(reg_inv))))
    return mpmath.log(C)


def rank_bound(d, logN, logD):
    d = mpf(d)
    k2 = mpf(2) ** 7 / mpmath.log(2) * d
    k1 = 4 * d * k2
    k3 = k2 * (mpmath.log(16) * d ** 2 - 1)
    return k1 * mpf(logN) + k2 * mpf(logD) + k3


def log_C_d(d):
    d = int(d)
    s = 1 + mpf(3) ** (mpf(d) / 2)
    expo = s ** 8 / mpmath.log(s)
    base = 129 * (mpf(5) ** d - 1) * (3 * mpf(d)) ** 6
    C = (9 / (2 * mp.pi)) ** d * (3 * mpf(d) ** 2) ** d * base ** expo
    return mpmath.log(C)


def log_prop310(d, logD, logN, h_falt):
    """log of C_d D_K^(3/2) N^(1/2) (e^h h)^d with h = max(h_falt, e)."""
    h = max(mpf(h_falt), mp.e)
    DK = mpmath.exp(mpf(logD))
    N = mpmath.exp(mpf(logN))
    rest = DK ** mpf(1.5) * mpmath.sqrt(N) * (mpmath.exp(h) * h) ** int(d)
    return log_C_d(d) + mpmath.log(rest)


def log_thm34(d, logD, sigma, alpha1, alpha2):
    """log of exp{alpha1^d + alpha2 d^6 (log+ D)^2 [Sigma + log(d log+ D)]}."""
    d = int(d)
    lpD = logplus(mpmath.exp(mpf(logD)))
    expo = mpf(alpha1) ** d + mpf(alpha2) * mpf(d) ** 6 * lpD ** 2 * (mpf(sigma) + mpmath.log(d * lpD))
    return mpmath.log(mpmath.exp(expo))


def thm42(d0, logD_F, rad, c1, c2):
    """(log bound, beta1, beta2) with beta1 = c1 d0^6 log+ d0 (log+ D_F)^2, beta2 = c2^d0."""
    d0 = int(d0)
    beta1 = mpf(c1) * mpf(d0) ** 6 * logplus(d0) * logplus(mpmath.exp(mpf(logD_F))) ** 2
    beta2 = mpf(c2) ** d0
    return mpmath.log(mpmath.exp(beta1 * mpf(rad) ** 3 + beta2)), beta1, beta2
