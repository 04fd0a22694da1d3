"""Timing comparison of the compiled kernels against the pure-Python
fallback. Both implementations are imported directly, so the result does
not depend on which backend the package selected at import.

Usage: python3 benchmarks/bench_kernels.py [repeats]
"""

import sys
import time

import numpy as np

from switchstab import _kernels_py

try:
    from switchstab import _kernels_cy
except ImportError:
    _kernels_cy = None


def timeit(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_cases(horizon=200_000, M=4, n=6):
    rng = np.random.default_rng(0)
    P = rng.random((M, M)) + 0.05
    P /= P.sum(axis=1, keepdims=True)
    cum_rows = np.cumsum(P, axis=1)
    cum_rows[:, -1] = 1.0
    u_modes = rng.random(horizon)

    gap_probs = np.array([0.3, 0.4, 0.2, 0.1])
    gap_cum = np.cumsum(gap_probs)
    gap_cum[-1] = 1.0
    taus = np.array([1, 2, 4, 9])
    u_gaps = rng.random(horizon // 2)

    r = rng.integers(0, M, size=horizon)
    times = np.unique(rng.integers(0, horizon, size=horizon // 3))
    times = np.concatenate([[0], times[times > 0], [horizon + 5]])

    F = rng.standard_normal((M, M, n, n)) * (0.5 / np.sqrt(n))
    sigma = rng.integers(0, M, size=horizon)
    x0 = rng.standard_normal(n)

    return {
        "sample_modes": (cum_rows, 0, u_modes),
        "sample_gaps": (gap_cum, taus, u_gaps),
        "fill_sigma": (r, times, horizon - 1),
        "closed_loop": (F, r, sigma, x0, 1e12),
    }


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 5
    cases = make_cases()

    print(f"{'kernel':<14} {'python':>10} {'cython':>10} {'speedup':>9}")
    for name, args in cases.items():
        py_fn = getattr(_kernels_py, name)
        t_py = timeit(lambda: py_fn(*args), repeats)
        if _kernels_cy is None:
            print(f"{name:<14} {t_py * 1e3:>8.2f}ms {'n/a':>10} {'n/a':>9}")
            continue
        cy_fn = getattr(_kernels_cy, name)
        t_cy = timeit(lambda: cy_fn(*args), repeats)
        print(
            f"{name:<14} {t_py * 1e3:>8.2f}ms {t_cy * 1e3:>8.2f}ms "
            f"{t_py / t_cy:>8.1f}x"
        )

    if _kernels_cy is None:
        print("\ncompiled kernels not built; showing fallback timings only")


if __name__ == "__main__":
    main()
