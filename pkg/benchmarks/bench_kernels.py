"""Timing comparison of the two kernel backends on identical inputs.

Usage: python3 benchmarks/bench_kernels.py [--quick]

Each row times one kernel on one input size for both backends and reports
the median of several repeats. Inputs are seeded, so runs are comparable
across machines and changes.
"""

from __future__ import annotations

import argparse
import sys
from statistics import median
from time import perf_counter

import numpy as np

from modsup import _pykernels as pure

try:
    from modsup import _ckernels as compiled
except ImportError:
    compiled = None


def random_table(rng: np.random.Generator, n: int, m: int,
                 density: float = 0.5) -> np.ndarray:
    trans = rng.integers(0, n, size=(n, m), dtype=np.int32)
    mask = rng.random((n, m))
    trans[mask < 0.15] = -2
    trans[(mask >= 0.15) & (mask >= density + 0.15)] = -1
    return trans


def timed(fn, *args, repeats: int) -> float:
    samples = []
    for _ in range(repeats):
        t0 = perf_counter()
        fn(*args)
        samples.append(perf_counter() - t0)
    return median(samples)


def cases(quick: bool):
    rng = np.random.default_rng(7)
    sizes = [200, 2000] if quick else [200, 2000, 20000]
    for n in sizes:
        m = 8
        trans = random_table(rng, n, m)
        marked = (rng.random(n) < 0.3).astype(np.uint8)
        yield f"reachable          n={n:>6}", (trans, 0), "reachable"
        yield f"coreachable        n={n:>6}", (trans, marked), "coreachable"

    pair_sizes = [60, 250] if quick else [60, 250, 900]
    for n in pair_sizes:
        ta = random_table(rng, n, 6, density=0.7)
        tb = random_table(rng, n, 6, density=0.7)
        yield f"product_pair       n={n:>6}", (ta, tb, 0, 0), "product_pair"

    subset_sizes = [100, 600] if quick else [100, 600, 2500]
    for n in subset_sizes:
        trans = random_table(rng, n, 6, density=0.6)
        trans[trans == -2] = -1
        marked = (rng.random(n) < 0.3).astype(np.uint8)
        keep = np.array([1, 1, 1, 0, 0, 0], dtype=np.uint8)
        yield f"subset_project     n={n:>6}", (trans, 0, marked, keep), \
            "subset_project"

    refine_sizes = [500, 5000] if quick else [500, 5000, 50000]
    for n in refine_sizes:
        trans = rng.integers(0, n, size=(n, 4), dtype=np.int32)
        status = rng.integers(0, 3, size=n, dtype=np.int64)
        yield f"refine_partition   n={n:>6}", (trans, status), \
            "refine_partition"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true",
                        help="smaller sizes, fewer repeats")
    args = parser.parse_args(argv)
    if compiled is None:
        print("compiled extension not importable; nothing to compare",
              file=sys.stderr)
        return 1
    repeats = 3 if args.quick else 5
    print(f"{'case':<30} {'pure (ms)':>12} {'compiled (ms)':>14} "
          f"{'speedup':>9}")
    for label, inputs, name in cases(args.quick):
        t_pure = timed(getattr(pure, name), *inputs, repeats=repeats)
        t_comp = timed(getattr(compiled, name), *inputs, repeats=repeats)
        ratio = t_pure / t_comp if t_comp > 0 else float("inf")
        print(f"{label:<30} {t_pure * 1e3:>12.2f} {t_comp * 1e3:>14.2f} "
              f"{ratio:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
