"""Explicit bound formulas, evaluated in log space.

Every function is a pure function of its named inputs and a
ConstantsLedger.  Large magnitudes are returned as TowerReal values; the
JSON form produced by `bound_json` carries the ledger hash and the proxies
that were used.

Convention: log+ x = max(1, log x), and log+ of a nonpositive argument is
taken to be 1 (the floor).  Arguments such as `logD_K` are already
logarithms, so log+ D_K = max(1, logD_K).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arith import is_prime, prime_divisors
from .errors import DomainError
from .ledger import ConstantsLedger
from .tower import TowerReal

H_FALT_FLOOR = math.e


def _lp(x: float) -> float:
    """log+ x, floored at 1 (also for x <= 0)."""
    if x <= math.e:
        return 1.0
    return math.log(x)


def _lp_of_log(log_x: float) -> float:
    """log+ X given log X."""
    return max(1.0, log_x)


def _ledger(ledger: Optional[ConstantsLedger]) -> ConstantsLedger:
    return ledger if ledger is not None else ConstantsLedger()


def _check_d(d) -> int:
    if int(d) != d or d < 1:
        raise DomainError("degree d must be an integer >= 1")
    return int(d)


def _log_tower(x) -> TowerReal:
    """log of a positive float or TowerReal, as a TowerReal."""
    x = TowerReal.coerce(x)
    if not x.is_positive():
        raise DomainError("expected a positive quantity")
    return x.log()


def _power_tower(base: float, k: float) -> TowerReal:
    """base^k for base > 0 without overflow."""
    return TowerReal(k * math.log(base), 1).normalized()


def bound_json(t: TowerReal, ledger: Optional[ConstantsLedger] = None, proxies: Sequence[str] = (),
               **extra) -> dict:
    out = t.to_json()
    out["ledger_hash"] = _ledger(ledger).hash
    out["proxies_used"] = list(proxies)
    out.update(extra)
    return out


# ---------------------------------------------------------------------------
# height bound for S-integral points
# ---------------------------------------------------------------------------

def thm1_terms(r: int, d: int, logV: float, heights: Sequence[float], reg: float,
               ledger: Optional[ConstantsLedger] = None) -> dict[str, float]:
    """The log of each factor of C_{E,K}."""
    L = _ledger(ledger)
    if int(r) != r or r < 1:
        raise DomainError("r must be an integer >= 1")
    d = _check_d(d)
    if len(heights) != r:
        raise DomainError("need one height per generator")
    if not reg > 0:
        raise DomainError("regulator must be positive")
    log_reg_inv = -math.log(reg)
    lpV = _lp(logV)
    lpR = _lp(log_reg_inv)
    return {
        "gamma2": r * r * math.log(L.gamma2),
        "rank": 2 * r * r * math.log(r),
        "degree": (9 * r + 15) * math.log(d),
        "log_degree": (r + 6) * math.log(_lp(d)),
        "logV": (r + 7) * math.log(lpV),
        "loglogV": 2 * math.log(_lp(lpV)),
        "heights": math.fsum(math.log(max(1.0, h)) for h in heights),
        "reg_inv": math.log(_lp_of_log(log_reg_inv)),
        "log_reg_inv": 2 * math.log(lpR),
        "loglog_reg_inv": math.log(_lp(lpR)),
    }


def thm1_C_EK(r: int, d: int, logV: float, heights: Sequence[float], reg: float,
              ledger: Optional[ConstantsLedger] = None) -> TowerReal:
    """C_{E,K} as exp(log C)."""
    return TowerReal(math.fsum(thm1_terms(r, d, logV, heights, reg, ledger).values()), 1)


def thm1_full_bound(C_EK: TowerReal, r: int, d: int, sigma_S: float,
                    ledger: Optional[ConstantsLedger] = None) -> TowerReal:
    """C_{E,K} exp((8r^2 + gamma1 d r) Sigma_S); gamma0 when r = 0."""
    L = _ledger(ledger)
    if r < 0:
        raise DomainError("rank must be nonnegative")
    if r == 0:
        return TowerReal(L.gamma0)
    if sigma_S < 0:
        raise DomainError("Sigma_S must be nonnegative")
    if sigma_S == 0:
        return C_EK
    expo = (8 * r * r + L.gamma1 * d * r) * sigma_S
    return (TowerReal.coerce(C_EK).log() + expo).exp()


# ---------------------------------------------------------------------------
# rank and conductor
# ---------------------------------------------------------------------------

def rank_kappas(d: int) -> tuple[float, float, float]:
    """(kappa1, kappa2, kappa3) of the explicit rank bound."""
    d = _check_d(d)
    k2 = 2 ** 7 * d / math.log(2)
    k1 = 4 * d * k2
    k3 = k2 * (math.log(16) * d * d - 1)
    return k1, k2, k3


def rank_bound(d: int, logN_F0: float, logD_K: float) -> float:
    """kappa1 log N(F0) + kappa2 log D_K + kappa3."""
    if logN_F0 < 0 or logD_K < 0:
        raise DomainError("logarithms must be nonnegative")
    k1, k2, k3 = rank_kappas(d)
    return k1 * logN_F0 + k2 * logD_K + k3


def rank_bound_coarse(d: int, logD_K: float, ledger: Optional[ConstantsLedger] = None) -> float:
    """ll_rank d^3 log+ D_K."""
    d = _check_d(d)
    return _ledger(ledger).ll_rank * d ** 3 * _lp_of_log(logD_K)


def conductor_exponent_cap(p: int, e: int) -> int:
    """Largest possible exponent of a prime above p in the conductor."""
    if int(e) != e or e < 1:
        raise DomainError("ramification index must be >= 1")
    if not is_prime(int(p)):
        raise DomainError(f"{p} is not prime")
    if p >= 5:
        cap = 2
    elif p == 3:
        cap = 2 + 3 * e
    else:
        cap = 2 + 6 * e
    assert cap <= 8 * e
    return cap


def conductor_transfer(d: int, logN_base: float) -> float:
    """8 d log N: the conductor over K from the one over the base field."""
    if d < 0 or logN_base < 0:
        raise DomainError("inputs must be nonnegative")
    return 8 * d * logN_base


def bad_prime_proxy(A, B) -> list[int]:
    """Primes dividing 16(4A^3 + 27B^2) for an integral model (superset of the bad primes)."""
    A, B = Fraction(A), Fraction(B)
    u = 1
    for p in prime_divisors(A.denominator, B.denominator):
        k = 0
        while (A * Fraction(p) ** (4 * k)).denominator != 1 or (B * Fraction(p) ** (6 * k)).denominator != 1:
            k += 1
        u *= p ** k
    A, B = int(A * u ** 4), int(B * u ** 6)
    disc = 16 * (4 * A ** 3 + 27 * B ** 2)
    if disc == 0:
        raise DomainError("singular curve")
    return prime_divisors(disc)


def logN_F0_proxy(A, B) -> float:
    """log of the product of the proxy bad primes."""
    return math.fsum(math.log(p) for p in bad_prime_proxy(A, B))


F0_PROXY_TAG = "F0: primes dividing 16(4A^3+27B^2)"


# ---------------------------------------------------------------------------
# generators and regulator
# ---------------------------------------------------------------------------

def _masser_base_log(d: int, kappa4: float) -> float:
    return math.log(d ** 3 * _lp(d) ** 2 / kappa4)


def lemma38_bounds(d: int, logD_K: float, reg, r: int, ledger: Optional[ConstantsLedger] = None) -> dict:
    """Regulator and generator-height bounds from Minkowski and Masser."""
    L = _ledger(ledger)
    d = _check_d(d)
    out = {
        "logplus_reg_inv_bound": L.ll_reg_inv * d ** 3 * _lp(d) * _lp_of_log(logD_K) * _lp(logD_K),
        "kappa4": L.kappa4,
    }
    if r >= 1:
        base = _masser_base_log(d, L.kappa4)
        log_fact4 = 4 * math.lgamma(r + 1)
        log_reg = _log_tower(reg)
        out["explicit_reg_inv_bound"] = 4 * r * math.log(r) + r * base
        out["logV_bound"] = (log_reg + ((r - 1) * base + log_fact4)).exp()
        out["prod_height_bound"] = (log_reg + (r * base + log_fact4)).exp()
    return out


def prop310_exponent_block(d: int) -> float:
    """(1 + 3^(d/2))^8 / log(1 + 3^(d/2))."""
    d = _check_d(d)
    L1 = 0.5 * d * math.log(3) + math.log1p(3 ** (-0.5 * d))
    return math.exp(8 * L1 - math.log(L1))


def prop310_log_Cd(d: int) -> TowerReal:
    """log C_d, as a TowerReal (it exceeds a double for large d)."""
    d = _check_d(d)
    L1 = 0.5 * d * math.log(3) + math.log1p(3 ** (-0.5 * d))
    inner = math.log(129) + d * math.log(5) + math.log1p(-(5.0 ** -d)) + 6 * math.log(3 * d)
    block = TowerReal(8 * L1 - math.log(L1) + math.log(inner), 1)
    small = d * math.log(9 / (2 * math.pi)) + d * math.log(3 * d * d)
    return block + small


def prop310_reg_bound(d: int, logD_K: float, logN_F: float, h_falt: float) -> TowerReal:
    """C_d D_K^(3/2) N(F)^(1/2) (e^h h)^d with h = max(h_falt, e)."""
    d = _check_d(d)
    if logD_K < 0 or logN_F < 0:
        raise DomainError("logarithms must be nonnegative")
    h = max(float(h_falt), H_FALT_FLOOR)
    rest = 1.5 * logD_K + 0.5 * logN_F + d * (h + math.log(h))
    return (prop310_log_Cd(d) + rest).exp()


def lemma39_bounds(d: int, logD_K: float, ledger: Optional[ConstantsLedger] = None) -> dict:
    """Conditional bounds for Reg, log+ log V and the product of generator heights."""
    L = _ledger(ledger)
    d = _check_d(d)
    if logD_K < 0:
        raise DomainError("logD_K must be nonnegative")
    lpD = _lp_of_log(logD_K)
    k5d = _power_tower(L.kappa5, d)
    log_reg = k5d + (math.log(L.ll_reg) + 1.5 * logD_K)
    log_loglogV = d * math.log(L.kappa6) + math.log(L.ll_loglogV * lpD * _lp(logD_K))
    log_prod = k5d + (math.log(L.ll_prod) + L.kappa7 * d ** 3 * lpD * math.log(d * lpD) + 1.5 * logD_K)
    return {
        "reg_bound": log_reg.exp(),
        "loglogV_bound": TowerReal(log_loglogV, 1).normalized(),
        "prod_bound": log_prod.exp(),
    }


def kappa5_dominating(d_max: int, logN_base: float, h_falt_base: float) -> float:
    """Smallest kappa5 with e^(kappa5^d) >= C_d N^(1/2) (e^h h)^d for all d <= d_max.

    The conductor over K is bounded through `conductor_transfer` and the
    Faltings height by the one over the base field, as in the proof path.
    """
    h = max(float(h_falt_base), H_FALT_FLOOR)
    best = 1.0
    for d in range(1, d_max + 1):
        need = prop310_log_Cd(d) + (0.5 * conductor_transfer(d, logN_base) + d * (h + math.log(h)))
        k = math.exp(need.log_float() / d)
        best = max(best, k * (1 + 1e-12))
    return best


# ---------------------------------------------------------------------------
# conditional height bound and abc
# ---------------------------------------------------------------------------

def thm34_exponent(d: int, logD_K: float, sigma_S: float, ledger: Optional[ConstantsLedger] = None) -> TowerReal:
    L = _ledger(ledger)
    d = _check_d(d)
    if sigma_S < 0 or logD_K < 0:
        raise DomainError("inputs must be nonnegative")
    lpD = _lp_of_log(logD_K)
    second = L.alpha2 * d ** 6 * lpD ** 2 * (sigma_S + math.log(d * lpD))
    return _power_tower(L.alpha1, d) + second


def thm34_bound(d: int, logD_K: float, sigma_S: float, ledger: Optional[ConstantsLedger] = None) -> TowerReal:
    """exp{alpha1^d + alpha2 d^6 (log+ D_K)^2 [Sigma_S + log(d log+ D_K)]}."""
    return thm34_exponent(d, logD_K, sigma_S, ledger).exp()


def thm42_betas(d0: int, logD_F: float, ledger: Optional[ConstantsLedger] = None) -> tuple[float, float]:
    L = _ledger(ledger)
    d0 = _check_d(d0)
    beta1 = L.c1_abc * d0 ** 6 * _lp(d0) * _lp_of_log(logD_F) ** 2
    beta2 = L.c2_abc ** d0
    return beta1, beta2


def thm42_abc_bound(d0: int, logD_F: float, rad: float,
                    ledger: Optional[ConstantsLedger] = None) -> tuple[TowerReal, float, float]:
    """(exp{beta1 rad^3 + beta2}, beta1, beta2)."""
    if rad < 0:
        raise DomainError("rad must be nonnegative")
    beta1, beta2 = thm42_betas(d0, logD_F, ledger)
    return TowerReal(beta1 * rad ** 3 + beta2, 1), beta1, beta2


# ---------------------------------------------------------------------------
# contribution table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContributionRow:
    factor: str
    log_contribution: float
    rad_growth: str
    rad_power: float

    def to_json(self) -> dict:
        return {"factor": self.factor, "log_contribution": self.log_contribution,
                "rad_growth": self.rad_growth, "rad_power": self.rad_power}


def remark41_report(r: int, d: int, sigma_S: float, rad: float, logD_K: float,
                    ledger: Optional[ConstantsLedger] = None) -> list[ContributionRow]:
    """Log-contribution of each factor of the height bound with its growth in rad.

    Factors that depend on the unknown generators are evaluated through
    their conditional upper bounds.  rad_power is the exponent of rad in
    the growth class (log factors count as 0).
    """
    L = _ledger(ledger)
    d = _check_d(d)
    if r < 0 or sigma_S < 0 or rad < 0:
        raise DomainError("inputs must be nonnegative")
    l38 = lemma38_bounds(d, logD_K, 1.0, 0, L)
    l39 = lemma39_bounds(d, logD_K, L)
    B = l38["logplus_reg_inv_bound"]
    reg_factor = math.log(max(1.0, B)) + 2 * math.log(_lp(B)) + math.log(_lp(_lp(B)))
    V = float(l39["loglogV_bound"])
    logV_factor = (r + 7) * math.log(max(1.0, V)) + 2 * math.log(_lp(V))
    rows = [
        ("r^(2r^2)", 2 * r * r * math.log(r) if r else 0.0, "rad^2 log rad", 2),
        ("gamma2^(r^2)", r * r * math.log(L.gamma2), "rad^2", 2),
        ("d^(9r+15) (log+ d)^(r+6)", (9 * r + 15) * math.log(d) + (r + 6) * math.log(_lp(d)), "rad", 1),
        ("regulator factor", reg_factor, "rad log rad", 1),
        ("(log+ log V)^(r+7)", logV_factor, "rad log rad", 1),
        ("prod max(1, h(Q_i))", l39["prod_bound"].log_float() if r else 0.0, "rad log rad", 1),
        ("exp(gamma1 d r Sigma_S)", L.gamma1 * d * r * sigma_S, "rad^2", 2),
        ("exp(8 r^2 Sigma_S)", 8 * r * r * sigma_S, "rad^3", 3),
    ]
    return [ContributionRow(*row) for row in rows]


def render_report(rows: Sequence[ContributionRow]) -> str:
    width = max(len(row.factor) for row in rows)
    lines = [f"{'factor'.ljust(width)}  {'log contribution':>18}  growth in rad"]
    for row in rows:
        lines.append(f"{row.factor.ljust(width)}  {row.log_contribution:>18.6g}  {row.rad_growth}")
    return "\n".join(lines)
