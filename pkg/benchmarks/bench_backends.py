"""Benchmark the degree-1 pair grouping backends against each other.

Run as: python3 benchmarks/bench_backends.py [--sizes 200,400,800] [--reps 3]

All backends must return identical dictionaries; the script cross-checks
before timing so a fast-but-wrong kernel can never look good here.
"""

import argparse
import time

import numpy as np

from richlines import fastpath


def make_points(rng, n, bound=10_000):
    pts = set()
    while len(pts) < n:
        pts.add((int(rng.integers(-bound, bound)), int(rng.integers(-bound, bound))))
    xs, ys = zip(*sorted(pts))
    return np.array(xs, dtype=np.int64), np.array(ys, dtype=np.int64)


def bench(px, py, backend, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fastpath.pair_line_counts(px, py, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="200,400,800,1600")
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)
    backends = fastpath.available_backends()
    print(f"backends: {', '.join(backends)} (default: {fastpath.default_backend()})")
    if "numba" in backends:
        # warm the jit outside the timed region
        px, py = make_points(rng, 50)
        fastpath.pair_line_counts(px, py, backend="numba")
    header = "n".rjust(8) + "".join(b.rjust(12) for b in backends)
    print(header)
    for n in sizes:
        px, py = make_points(rng, n)
        results = {b: fastpath.pair_line_counts(px, py, backend=b) for b in backends}
        ref = results[backends[0]]
        for b, res in results.items():
            assert res == ref, f"backend {b} disagrees at n={n}"
        row = str(n).rjust(8)
        for b in backends:
            row += f"{bench(px, py, b, args.reps) * 1000:10.1f}ms"
        print(row)


if __name__ == "__main__":
    main()
