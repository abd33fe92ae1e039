"""Compare the compiled and pure-python row-reduction kernels.

Usage: python3 benchmarks/bench_kernels.py [size] [repeats]
"""

import random
import sys
import time
from fractions import Fraction

from super2vec import _kernels_py

try:
    from super2vec import _kernels
except ImportError:
    _kernels = None


def random_rows(rng, n, m):
    return [
        [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(m)]
        for _ in range(n)
    ]


def bench(impl, rng, n, repeats):
    total = 0.0
    checks = []
    for _ in range(repeats):
        rows = random_rows(rng, n, n + 4)
        t0 = time.perf_counter()
        red, pivots = impl.rref(rows, n + 4)
        total += time.perf_counter() - t0
        checks.append((len(pivots), [r[:] for r in red]))
    for _ in range(repeats):
        a = random_rows(rng, n, n)
        b = random_rows(rng, n, n)
        t0 = time.perf_counter()
        impl.mat_mul(a, b, n, Fraction(0))
        total += time.perf_counter() - t0
    return total, checks


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 40
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 3
    t_py, res_py = bench(_kernels_py, random.Random(7), n, repeats)
    print(f"python backend:  {t_py:8.3f} s  (n={n}, repeats={repeats})")
    if _kernels is None:
        print("cython backend:  not built")
        return
    t_cy, res_cy = bench(_kernels, random.Random(7), n, repeats)
    print(f"cython backend:  {t_cy:8.3f} s  (n={n}, repeats={repeats})")
    assert res_py == res_cy, "backends disagree"
    print(f"agreement: OK, speedup {t_py / t_cy:.2f}x")


if __name__ == "__main__":
    main()
