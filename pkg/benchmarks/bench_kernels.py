#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--points 20000] [--repeat 3]

Both implementations classify the same Monte Carlo points of T; the script
checks the outputs are identical and reports points per second.
"""
import argparse
import time

import numpy as np

from coinduel import _kernels_py
from coinduel.regions import monte_carlo_points

try:
    from coinduel import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--cap", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    q, p = monte_carlo_points(args.points, args.seed)
    impls = [("python", _kernels_py)]
    if _kernels_c is not None:
        impls.insert(0, ("cython", _kernels_c))
    else:
        print("compiled extension unavailable; timing the fallback only")

    results = {}
    for name, mod in impls:
        secs, out = best_of(lambda: mod.classify_batch(q, p, args.cap), args.repeat)
        results[name] = (secs, out)
        print(f"classify_batch  {name:<7} {secs * 1e3:10.1f} ms  {args.points / secs:14,.0f} points/s")

    # a single long indicator scan, the inner loop of the batch kernel
    c, s, two_q = 2 * 1e-4 * 2e-4, 1 - 3e-4, 2e-4
    for name, mod in impls:
        secs, _ = best_of(lambda: mod.scan_optimal(c, s, two_q, 10**6, 1e-15), args.repeat)
        print(f"scan_optimal    {name:<7} {secs * 1e3:10.1f} ms  (N = 7276 at q=1e-4, p=2e-4)")

    if len(results) == 2:
        (tc, oc), (tp, op) = results["cython"], results["python"]
        same = all(np.array_equal(oc[k], op[k]) for k in oc)
        print(f"speed-up {tp / tc:.1f}x, outputs identical: {same}")
        if not same:
            raise SystemExit(1)


if __name__ == "__main__":
    main()
