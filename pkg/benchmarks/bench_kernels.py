#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

Runs each kernel on both backends over a few batch sizes and prints the
median wall time plus the compiled/numpy speedup. If the extension is not
built, only the fallback column is reported.
"""

import argparse
import statistics
import time

import numpy as np

from hopflab import _kernels_py

try:
    from hopflab import _kernels
except ImportError:
    _kernels = None


def median_time(fn, args, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def make_cases(rng):
    cases = []
    for n in (10_000, 100_000, 1_000_000):
        a = np.ascontiguousarray(rng.standard_normal((n, 4)))
        b = np.ascontiguousarray(rng.standard_normal((n, 4)))
        cases.append((f"quat_mul_2d n={n:>9,}", "quat_mul_2d", (a, b)))
    for n in (10_000, 100_000):
        a = np.ascontiguousarray(rng.standard_normal((n, 8)))
        b = np.ascontiguousarray(rng.standard_normal((n, 8)))
        cases.append((f"oct_mul_2d  n={n:>9,}", "oct_mul_2d", (a, b)))
    l = rng.standard_normal(4)
    l /= np.linalg.norm(l)
    r = rng.standard_normal(4)
    r /= np.linalg.norm(r)
    v = np.ascontiguousarray(rng.standard_normal((1_000_000, 4)))
    cases.append(("rot4_apply  n=1,000,000", "rot4_apply_2d", (l, r, v)))
    for m in (256, 1024):
        a = np.ascontiguousarray(rng.standard_normal((m, 16)))
        a /= np.linalg.norm(a, axis=1)[:, None]
        b = np.ascontiguousarray(rng.standard_normal((m, 16)))
        b /= np.linalg.norm(b, axis=1)[:, None]
        cases.append((f"row_max_dot {m:>4}x{m}x16", "row_max_dot_2d", (a, b)))
    return cases


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    cases = make_cases(rng)

    print(f"{'kernel':<28}{'numpy':>12}{'cython':>12}{'speedup':>10}")
    print("-" * 62)
    for label, name, call_args in cases:
        t_py = median_time(getattr(_kernels_py, name), call_args, args.repeats)
        if _kernels is None:
            print(f"{label:<28}{t_py * 1e3:>10.2f}ms{'-':>12}{'-':>10}")
            continue
        t_cy = median_time(getattr(_kernels, name), call_args, args.repeats)
        print(f"{label:<28}{t_py * 1e3:>10.2f}ms{t_cy * 1e3:>10.2f}ms{t_py / t_cy:>9.1f}x")
    if _kernels is None:
        print("\ncompiled extension not built; showing the fallback only")


if __name__ == "__main__":
    main()
