#!/usr/bin/env python3
"""Benchmark the numba-compiled kernels against the pure-numpy fallback.

The CSS recursion is the grid search's inner loop (tens of thousands of
calls per fit pass), so the compiled-vs-interpreted gap here is the gap for
the whole pipeline. Run from the repo root:

    python3 benchmarks/bench_kernels.py

Set BTCARIMA_NO_NUMBA=1 to check what the package would do without numba
(both columns then time the same interpreted code).
"""

from __future__ import annotations

import time

import numpy as np

from btcarima import _kernels


def _time(fn, *args, repeat: int = 5, number: int = 20) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def main() -> None:
    rng = np.random.default_rng(0)
    n = 1095
    x = rng.normal(0.0, 0.02, n)
    cases = [
        ("css_sse p=1 q=0", _kernels.css_sse, _kernels.css_sse_pure,
         (x, np.array([0.5]), np.zeros(0), 0.001)),
        ("css_sse p=4 q=2", _kernels.css_sse, _kernels.css_sse_pure,
         (x, np.array([0.4, -0.2, 0.1, 0.05]), np.array([0.3, -0.1]), 0.001)),
        ("css_sse p=9 q=9", _kernels.css_sse, _kernels.css_sse_pure,
         (x, rng.normal(0, 0.2, 9), rng.normal(0, 0.2, 9), 0.001)),
        ("css_residuals p=9 q=9", _kernels.css_residuals,
         _kernels.css_residuals_pure,
         (x, rng.normal(0, 0.2, 9), rng.normal(0, 0.2, 9), 0.001)),
        ("one_step_forecast m=8", _kernels.one_step_forecast,
         _kernels.one_step_forecast_pure,
         (rng.normal(0, 0.02, 8), rng.normal(0, 0.02, 9),
          rng.normal(0, 0.02, 9), rng.normal(0, 0.2, 9),
          rng.normal(0, 0.2, 9), 0.001)),
    ]

    print(f"active backend: {_kernels.ACTIVE_BACKEND}")
    print(f"{'kernel':28s} {'numba/active':>14s} {'pure numpy':>14s} {'speedup':>9s}")
    for name, fast, pure, args in cases:
        fast(*args)  # trigger JIT compilation outside the timing
        t_fast = _time(fast, *args)
        t_pure = _time(pure, *args, number=3)
        print(f"{name:28s} {t_fast * 1e6:>11.1f} us {t_pure * 1e6:>11.1f} us "
              f"{t_pure / t_fast:>8.1f}x")

    # agreement check: both backends must produce identical floats
    for name, fast, pure, args in cases:
        a, b = fast(*args), pure(*args)
        same = np.array_equal(np.asarray(a), np.asarray(b))
        print(f"bitwise agreement {name}: {'OK' if same else 'MISMATCH'}")


if __name__ == "__main__":
    main()
