"""Integer kernels: sieves, radical tables, abc pair enumeration, squareness prefilter.

Each kernel has a numba implementation and a numpy one.  Set
ELLBOUND_NUMBA=0 to force the numpy versions (also used when numba is not
importable).  Both produce identical arrays.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit
    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

USE_NUMBA = _HAVE_NUMBA and os.environ.get("ELLBOUND_NUMBA", "1").lower() not in ("0", "false", "no", "off")

# moduli for the squareness prefilter; a square is a square modulo each
_SQ_MODULI = (64, 63, 65, 11, 17, 19, 23)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def _qr_table(m: int) -> np.ndarray:
    t = np.zeros(m, dtype=np.bool_)
    t[(np.arange(m, dtype=np.int64) ** 2) % m] = True
    return t


_QR = tuple(_qr_table(m) for m in _SQ_MODULI)
_MODULI_LCM = int(np.lcm.reduce(np.array(_SQ_MODULI, dtype=np.int64)))


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def _spf_numpy(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    if n >= 1:
        spf[1] = 1
    for p in range(2, int(n ** 0.5) + 1):
        if spf[p] == 0:
            seg = spf[p * p:: p]
            seg[seg == 0] = p
    rest = np.nonzero(spf == 0)[0]
    rest = rest[rest >= 2]
    spf[rest] = rest
    return spf


def _radical_numpy(n: int) -> np.ndarray:
    rad = np.ones(n + 1, dtype=np.int64)
    rad[0] = 0
    is_comp = np.zeros(n + 1, dtype=np.bool_)
    for p in range(2, n + 1):
        if not is_comp[p]:
            is_comp[p * p:: p] = True
            rad[p:: p] *= p
    return rad


def _coprime_pairs_numpy(cap: int, rad: np.ndarray):
    # all a < b with a + b = c <= cap and gcd(a, b) = 1
    c = np.arange(3, cap + 1, dtype=np.int64)
    out_a, out_b = [], []
    for cc in c:
        a = np.arange(1, (cc + 1) // 2, dtype=np.int64)
        b = cc - a
        keep = np.gcd(a, b) == 1
        out_a.append(a[keep])
        out_b.append(b[keep])
    if cap >= 2:
        out_a.insert(0, np.array([1], dtype=np.int64))
        out_b.insert(0, np.array([1], dtype=np.int64))
    a = np.concatenate(out_a) if out_a else np.zeros(0, dtype=np.int64)
    b = np.concatenate(out_b) if out_b else np.zeros(0, dtype=np.int64)
    cc = a + b
    r = rad[a] * rad[b] * rad[cc]
    return a, b, cc, r


def _square_candidates_numpy(A: int, B: int, w: int, bound: int) -> np.ndarray:
    u = np.arange(-bound, bound + 1, dtype=np.int64)
    keep = np.ones(u.shape, dtype=np.bool_)
    for m, qr in zip(_SQ_MODULI, _QR):
        um = u % m
        w4 = pow(w, 4, m)
        w6 = pow(w, 6, m)
        val = (um * um % m * um + (A % m) * um % m * w4 + (B % m) * w6) % m
        keep &= qr[val]
    return u[keep]


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True)
    def _spf_nb(n):
        spf = np.zeros(n + 1, dtype=np.int64)
        if n >= 1:
            spf[1] = 1
        for i in range(2, n + 1):
            if spf[i] == 0:
                spf[i] = i
                j = i * i
                while j <= n:
                    if spf[j] == 0:
                        spf[j] = i
                    j += i
        return spf

    @njit(cache=True)
    def _radical_nb(n):
        spf = _spf_nb(n)
        rad = np.ones(n + 1, dtype=np.int64)
        rad[0] = 0
        for k in range(2, n + 1):
            p = spf[k]
            q = k // p
            if q % p == 0:
                rad[k] = rad[q]
            else:
                rad[k] = rad[q] * p
        return rad

    @njit(cache=True)
    def _gcd_nb(a, b):
        while b:
            a, b = b, a % b
        return a

    @njit(cache=True)
    def _coprime_pairs_nb(cap, rad):
        count = 0
        for c in range(2, cap + 1):
            for a in range(1, c // 2 + 1):
                b = c - a
                if (a < b or c == 2) and _gcd_nb(a, b) == 1:
                    count += 1
        A = np.empty(count, dtype=np.int64)
        Bv = np.empty(count, dtype=np.int64)
        C = np.empty(count, dtype=np.int64)
        R = np.empty(count, dtype=np.int64)
        i = 0
        for c in range(2, cap + 1):
            for a in range(1, c // 2 + 1):
                b = c - a
                if (a < b or c == 2) and _gcd_nb(a, b) == 1:
                    A[i] = a
                    Bv[i] = b
                    C[i] = c
                    R[i] = rad[a] * rad[b] * rad[c]
                    i += 1
        return A, Bv, C, R

    @njit(cache=True)
    def _square_candidates_nb(A, B, w, bound, moduli, tables, offsets):
        n = 2 * bound + 1
        keep = np.empty(n, dtype=np.int64)
        k = 0
        nm = moduli.shape[0]
        for idx in range(n):
            u = idx - bound
            ok = True
            for j in range(nm):
                m = moduli[j]
                um = u % m
                wm = w % m
                w2 = wm * wm % m
                w4 = w2 * w2 % m
                w6 = w4 * w2 % m
                val = (um * um % m * um + (A % m) * um % m * w4 + (B % m) * w6) % m
                if not tables[offsets[j] + val]:
                    ok = False
                    break
            if ok:
                keep[k] = u
                k += 1
        return keep[:k]

    _MODULI_ARR = np.array(_SQ_MODULI, dtype=np.int64)
    _TABLES_ARR = np.concatenate(_QR)
    _OFFSETS_ARR = np.concatenate(([0], np.cumsum(_SQ_MODULI)[:-1])).astype(np.int64)


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def spf_sieve(n: int, use_numba: bool | None = None) -> np.ndarray:
    """Smallest prime factor of every k <= n (spf[0] = 0, spf[1] = 1)."""
    if (USE_NUMBA if use_numba is None else use_numba and _HAVE_NUMBA):
        return _spf_nb(int(n))
    return _spf_numpy(int(n))


def radical_table(n: int, use_numba: bool | None = None) -> np.ndarray:
    """rad(k) for k <= n (rad(0) = 0)."""
    if (USE_NUMBA if use_numba is None else use_numba and _HAVE_NUMBA):
        return _radical_nb(int(n))
    return _radical_numpy(int(n))


MAX_PAIR_CAP = 10 ** 6


def coprime_pairs(cap: int, use_numba: bool | None = None):
    """Arrays (a, b, c, rad(abc)) over coprime a <= b with a + b = c <= cap, ordered by (c, a)."""
    cap = int(cap)
    if cap > MAX_PAIR_CAP:
        raise ValueError("cap too large for int64 radicals")
    rad = radical_table(max(cap, 2), use_numba)
    if (USE_NUMBA if use_numba is None else use_numba and _HAVE_NUMBA):
        return _coprime_pairs_nb(cap, rad)
    a, b, c, r = _coprime_pairs_numpy(cap, rad)
    order = np.lexsort((a, c))
    return a[order], b[order], c[order], r[order]


def square_candidates(A: int, B: int, w: int, bound: int, use_numba: bool | None = None) -> np.ndarray:
    """u in [-bound, bound] for which u^3 + A u w^4 + B w^6 passes the residue test."""
    # reduce the curve data so numba sees small int64 values
    L = _MODULI_LCM
    A, B, w = int(A) % L, int(B) % L, int(w) % L
    if (USE_NUMBA if use_numba is None else use_numba and _HAVE_NUMBA):
        return _square_candidates_nb(A, B, w, int(bound), _MODULI_ARR, _TABLES_ARR, _OFFSETS_ARR)
    return _square_candidates_numpy(int(A), int(B), int(w), int(bound))
