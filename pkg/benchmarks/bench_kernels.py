#!/usr/bin/env python3
"""Benchmark the compiled stepping kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 256,1024,4096] [--reps 2000]
"""

import argparse
import time

import numpy as np

from twoscale_euler.kernels import get_backend


def time_call(fn, reps):
    best = float("inf")
    for _ in range(3):
        t0 = time.perf_counter()
        for _ in range(reps):
            fn()
        best = min(best, (time.perf_counter() - t0) / reps)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="256,1024,4096")
    parser.add_argument("--reps", type=int, default=2000)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    py = get_backend("python")
    try:
        cy = get_backend("cython")
    except ImportError:
        cy = None
        print("compiled extension not available; timing the fallback only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<16} {'n':>6} {'python':>12} {'cython':>12} {'speedup':>8}")
    for n in sizes:
        q = rng.uniform(-0.5, 0.5, n)
        q -= q.mean()
        rho = 1.0 + 0.05 * rng.uniform(-1, 1, n)
        mom = rho * rng.uniform(0.5, 1.5, n)

        cases = [
            ("scalar_roe_step",
             lambda b: b.scalar_roe_step(q, 0.5, 1.0, 1e-3)),
            ("direct_roe_step",
             lambda b: b.direct_roe_step(rho, mom, 0.05, 1.0, 1e-5)),
        ]
        for name, call in cases:
            t_py = time_call(lambda: call(py), args.reps)
            if cy is not None:
                t_cy = time_call(lambda: call(cy), args.reps)
                print(f"{name:<16} {n:>6} {t_py * 1e6:>10.1f}us "
                      f"{t_cy * 1e6:>10.1f}us {t_py / t_cy:>7.1f}x")
            else:
                print(f"{name:<16} {n:>6} {t_py * 1e6:>10.1f}us {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
