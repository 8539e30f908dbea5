#!/usr/bin/env python3
"""Time the float kernels under the numba and numpy backends.

Kernels: divisor_power_table (d_w(n) sieve), circle_function (sign-grid
samples), horner_circle (Rouche samples), aberth (root warm start).  Both
backends are checked to agree before timing.

Usage:
    python benchmarks/bench_kernels.py [--grid G] [--degree D] [--limit X] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from symrh import kernels
from symrh._accel import HAVE_NUMBA


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=1 << 16, help="sample points on the circle")
    ap.add_argument("--degree", type=int, default=86)
    ap.add_argument("--limit", type=int, default=200_000, help="divisor table size")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    d = args.degree
    cr = rng.standard_normal(d + 1)
    ci = np.zeros(d + 1)
    expo = np.arange(d + 1) - d / 2
    thetas = 2 * np.pi * (np.arange(args.grid) + 0.3183) / args.grid
    coefs = rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1)
    start = 1.1 * np.exp(2j * np.pi * (np.arange(d) + 0.4) / d)

    cases = {
        "divisor_power_table": lambda b: kernels.divisor_power_table(4, args.limit, backend=b),
        "circle_function": lambda b: kernels.circle_function(cr, ci, expo, thetas, backend=b),
        "horner_circle": lambda b: kernels.horner_circle(coefs, thetas, backend=b),
        "aberth": lambda b: kernels.aberth(coefs, start, backend=b),
    }
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    if not HAVE_NUMBA:
        print("numba unavailable (or SYMRH_DISABLE_NUMBA set): timing numpy only")

    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in backends) + ("   speedup" if len(backends) == 2 else ""))
    for name, fn in cases.items():
        ref = fn("numpy")
        times = []
        for b in backends:
            out = fn(b)  # warm-up (JIT compile)
            a0 = np.asarray(out[0] if isinstance(out, tuple) else out)
            r0 = np.asarray(ref[0] if isinstance(ref, tuple) else ref)
            if name == "aberth":
                a0, r0 = np.sort_complex(a0), np.sort_complex(r0)
            if not np.allclose(a0, r0, rtol=1e-8, atol=1e-8):
                raise SystemExit(f"{name}: backends disagree")
            times.append(_best(lambda: fn(b), args.repeat))
        row = f"{name:<22}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"   {times[0] / times[1]:>6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
