"""Benchmark the compiled matrix kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times matmul_mod and rref_mod on a range of sizes and moduli using both
backends (when the compiled extension is available) and prints a table
with speedups.
"""

import argparse
import time

import numpy as np

from sumnets import _core_py

try:
    from sumnets import _core
except ImportError:
    _core = None


def bench(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    impls = [("python", _core_py)]
    if _core is not None:
        impls.append(("cython", _core))
    else:
        print("compiled extension not available; timing the fallback only\n")

    rng = np.random.default_rng(0)
    cases = []
    for n in (16, 64, 256):
        for p in (2, 257, 2147483647):
            a = rng.integers(0, p, size=(n, n), dtype=np.int64)
            b = rng.integers(0, p, size=(n, n), dtype=np.int64)
            cases.append((f"matmul {n}x{n} mod {p}", [lambda a=a, b=b, p=p, m=m: m.matmul_mod(a, b, p) for _, m in impls]))
            work = rng.integers(0, p, size=(n, n), dtype=np.int64)
            cases.append((f"rref   {n}x{n} mod {p}", [lambda w=work, p=p, m=m: m.rref_mod(w.copy(), p) for _, m in impls]))

    header = f"{'case':<28}" + "".join(f"{name:>12}" for name, _ in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, fns in cases:
        times = [bench(fn, args.repeat) for fn in fns]
        row = f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
