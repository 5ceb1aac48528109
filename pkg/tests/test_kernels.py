from __future__ import annotations

import math

import numpy as np
import pytest

from ellbound import _kernels as K
from oracles.arith_oracle import naive_factor

needs_numba = pytest.mark.skipif(not K._HAVE_NUMBA, reason="numba not installed")


def test_radical_table_against_naive():
    rad = K.radical_table(3000, use_numba=False)
    for n in range(1, 3001):
        assert rad[n] == math.prod(naive_factor(n))


def test_spf_sieve():
    spf = K.spf_sieve(1000, use_numba=False)
    for n in range(2, 1001):
        assert spf[n] == min(naive_factor(n))


def test_coprime_pairs_enumeration():
    a, b, c, r = K.coprime_pairs(60, use_numba=False)
    expected = [(x, y) for z in range(2, 61) for x in range(1, z // 2 + 1) if math.gcd(x, z - x) == 1
                for y in [z - x]]
    assert list(zip(a.tolist(), b.tolist())) == expected
    assert all(ri == math.prod(naive_factor(x * y * (x + y))) for x, y, ri in zip(a.tolist(), b.tolist(), r.tolist()))


def test_square_candidates_keep_all_squares():
    # every u with u^3 - 2 a perfect square must survive the prefilter
    cands = set(K.square_candidates(0, -2, 1, 5000, use_numba=False).tolist())
    for u in range(-5000, 5001):
        v = u ** 3 - 2
        if v >= 0 and math.isqrt(v) ** 2 == v:
            assert u in cands


@needs_numba
@pytest.mark.parametrize("name,args", [("spf_sieve", (20000,)), ("radical_table", (20000,)),
                                       ("coprime_pairs", (300,)), ("square_candidates", (5, -7, 3, 20000))])
def test_backends_agree(name, args):
    fn = getattr(K, name)
    x, y = fn(*args, use_numba=False), fn(*args, use_numba=True)
    if isinstance(x, tuple):
        for u, v in zip(x, y):
            assert np.array_equal(u, v)
    else:
        assert np.array_equal(x, y)


def test_env_flag_selects_backend(monkeypatch):
    import importlib

    monkeypatch.setenv("ELLBOUND_NUMBA", "0")
    mod = importlib.reload(K)
    try:
        assert mod.backend() == "numpy"
    finally:
        monkeypatch.delenv("ELLBOUND_NUMBA")
        importlib.reload(K)
