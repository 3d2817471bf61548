#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Covers the three hot surfaces: the segmented divisor sieve, the
Kloosterman table S(1,b;q), and the all-pairs Weil scan.  Both backends
are imported directly, bypassing the import-time selection.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from divap import _pykernels

try:
    from divap import _ckernels
except ImportError:
    _ckernels = None


CASES = [
    ("tau2_range [1, 2e6)", "tau2_range", (1, 2_000_000)),
    ("tau2_range [1e7, 1.2e7)", "tau2_range", (10_000_000, 12_000_000)),
    ("kloosterman_table q=499", "kloosterman_table", (499,)),
    ("kloosterman_table q=2003", "kloosterman_table", (2003,)),
    ("kloosterman_sum q=999983", "kloosterman_sum", (1, 1, 999_983)),
    ("weil_scan_worst p=199", "weil_scan_worst", (199,)),
    ("weil_scan_worst p=499", "weil_scan_worst", (499,)),
]


def best_of(fn, args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _ckernels is None:
        print("compiled backend not built; showing numpy fallback only")

    header = f"{'case':32s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for label, name, fargs in CASES:
        t_py = best_of(getattr(_pykernels, name), fargs, args.repeat)
        if _ckernels is not None:
            t_c = best_of(getattr(_ckernels, name), fargs, args.repeat)
            a = getattr(_pykernels, name)(*fargs)
            b = getattr(_ckernels, name)(*fargs)
            if isinstance(a, np.ndarray):
                assert np.allclose(a, b, atol=1e-10), f"{label}: backend mismatch"
            print(f"{label:32s} {t_py * 1e3:9.1f}ms {t_c * 1e3:9.1f}ms {t_py / t_c:7.1f}x")
        else:
            print(f"{label:32s} {t_py * 1e3:9.1f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
