"""Benchmark the compiled DTW kernel against the pure-Python fallback.

Run:  python3 benchmarks/bench_dtw.py [--sizes 50,100,200,400,800] [--repeats 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from drivebench import _dtw_py

try:
    from drivebench import _dtw as _compiled
except ImportError:
    _compiled = None


def time_kernel(kernel, a, b, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        kernel.dtw_cost(a, b)
        best = min(best, time.perf_counter() - start)
    return best


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=str, default="50,100,200,400,800")
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    rng = np.random.default_rng(args.seed)
    if _compiled is None:
        print("compiled kernel not built; benchmarking the fallback only")
    print(f"{'n':>6} {'python (ms)':>12} {'compiled (ms)':>14} {'speedup':>8}")
    for n in sizes:
        a = np.cumsum(rng.standard_normal((n, 2)), axis=0)
        b = np.cumsum(rng.standard_normal((n, 2)), axis=0)
        t_py = time_kernel(_dtw_py, a, b, args.repeats)
        if _compiled is not None:
            t_c = time_kernel(_compiled, a, b, args.repeats)
            assert _compiled.dtw_cost(a, b) == _dtw_py.dtw_cost(a, b), "kernels disagree"
            print(f"{n:>6} {t_py * 1e3:>12.3f} {t_c * 1e3:>14.3f} {t_py / t_c:>8.1f}x")
        else:
            print(f"{n:>6} {t_py * 1e3:>12.3f} {'-':>14} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
