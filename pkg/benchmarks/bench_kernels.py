"""Time the integer kernels under both backends and check they agree.

    python3 benchmarks/bench_kernels.py [--n 1000000] [--cap 2000] [--repeat 3]

The first numba call per kernel includes JIT compilation; it is reported
separately and excluded from the timed repeats.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from ellbound import _kernels as K


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(x, y):
    if isinstance(x, tuple):
        return all(np.array_equal(a, b) for a, b in zip(x, y))
    return np.array_equal(x, y)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=1_000_000, help="sieve and radical table size")
    p.add_argument("--cap", type=int, default=2000, help="c <= cap for coprime pair enumeration")
    p.add_argument("--bound", type=int, default=200_000, help="|u| <= bound for the squareness prefilter")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)

    cases = [
        ("spf_sieve", lambda nb: K.spf_sieve(args.n, nb)),
        ("radical_table", lambda nb: K.radical_table(args.n, nb)),
        ("coprime_pairs", lambda nb: K.coprime_pairs(args.cap, nb)),
        ("square_candidates", lambda nb: K.square_candidates(0, -2, 1, args.bound, nb)),
    ]
    print(f"numba available: {K._HAVE_NUMBA}; default backend: {K.backend()}")
    print(f"{'kernel':<20}{'numpy s':>12}{'numba s':>12}{'jit s':>10}{'speedup':>10}  agree")
    for name, fn in cases:
        t_np, out_np = _time(lambda: fn(False), args.repeat)
        if K._HAVE_NUMBA:
            t0 = time.perf_counter()
            fn(True)
            jit = time.perf_counter() - t0
            t_nb, out_nb = _time(lambda: fn(True), args.repeat)
            agree = _same(out_np, out_nb)
            print(f"{name:<20}{t_np:>12.4f}{t_nb:>12.4f}{jit:>10.2f}{t_np / t_nb:>10.1f}  {agree}")
        else:
            print(f"{name:<20}{t_np:>12.4f}{'-':>12}{'-':>10}{'-':>10}  -")


if __name__ == "__main__":
    main()
