#!/usr/bin/env python3
"""Benchmark the NB2 hot kernels: numba backend vs pure-numpy fallback.

Times the two kernels that dominate mixed-model fit runtime and a full
NB-GLMM fit under each backend.  The numpy path is what you get with
SMELLSTAB_DISABLE_NUMBA=1.

Usage: python benchmarks/bench_kernels.py [--rows 200000] [--groups 50] [--repeat 5]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from smellstab.stats.accel import HAVE_NUMBA, USE_NUMBA
from smellstab.stats.glmm import fit_negbin_random_intercept
from smellstab.stats.kernels import inner_modes, nb2_row_terms
from smellstab.stats.simulate import simulate_nb_glmm_design


def _timeit(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rows", type=int, default=200_000)
    parser.add_argument("--groups", type=int, default=50)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    n, G = args.rows, args.groups
    y = rng.poisson(4.0, size=n).astype(float)
    eta = rng.normal(1.0, 0.5, size=n)
    groups = np.sort(rng.integers(0, G, size=n)).astype(np.int64)
    gptr = np.concatenate([[0], np.cumsum(np.bincount(groups, minlength=G))]).astype(np.int64)
    theta, sigma2 = 1.5, 0.25
    u0 = np.zeros(G)

    backends = ["numpy"] + (["numba"] if USE_NUMBA else [])  # jit disabled: numpy only
    print(f"rows={n} groups={G} repeat={args.repeat} "
          f"(numba available: {HAVE_NUMBA}, active by default: {USE_NUMBA})\n")
    header = f"{'kernel':<18}" + "".join(f"{b:>12}" for b in backends)
    if "numba" in backends:
        header += f"{'speedup':>10}"
    print(header)
    results: dict[str, dict[str, float]] = {}
    for name, call in (
        ("nb2_row_terms", lambda b: nb2_row_terms(y, eta, theta, force_backend=b)),
        ("inner_modes", lambda b: inner_modes(y, eta, theta, sigma2, groups, gptr, u0,
                                              force_backend=b)),
    ):
        times = {}
        for b in backends:
            call(b)  # warm up (jit compile)
            times[b] = _timeit(lambda: call(b), args.repeat)
        results[name] = times
        row = f"{name:<18}" + "".join(f"{times[b]*1e3:>10.2f}ms" for b in backends)
        if "numba" in times:
            row += f"{times['numpy'] / times['numba']:>9.1f}x"
        print(row)

    # end-to-end fit comparison via the env-selected path of each backend
    design, _ = simulate_nb_glmm_design(20, 200, [0.5, -0.3], 0.25, 1.5, seed=7)
    fit_negbin_random_intercept(design)  # warm up
    t_fit = _timeit(lambda: fit_negbin_random_intercept(design), max(2, args.repeat // 2))
    print(f"\nfull NB-GLMM fit (20x200 rows, active backend): {t_fit*1e3:.1f}ms")
    print("rerun with SMELLSTAB_DISABLE_NUMBA=1 to time the numpy-only fit path")


if __name__ == "__main__":
    main()
