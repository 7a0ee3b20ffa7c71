#!/usr/bin/env python3
"""Benchmark the compiled dephased-entropy kernel against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--grid-n 16 32 64] [--points 20000]
"""

import argparse
import time

import numpy as np

from sepcorr.correlations import _grid_axes, bloch_decomposition
from sepcorr.kernels import reference
from sepcorr.states import random_separable

try:
    from sepcorr.kernels import _fastgrid
except ImportError:
    _fastgrid = None


def _bench_grid(backend, data, axes, repeat=3):
    avec, bvec, tmat = data
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        backend.grid_scan(avec, bvec, tmat, axes, axes, 5)
        best = min(best, time.perf_counter() - t0)
    return best


def _bench_point(backend, data, axes, n_points):
    avec, bvec, tmat = data
    idx = np.arange(n_points) % axes.shape[0]
    t0 = time.perf_counter()
    for i in idx:
        backend.point_entropy(avec, bvec, tmat, axes[i], axes[(i * 7 + 3) % len(axes)])
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid-n", type=int, nargs="*", default=[16, 32, 64])
    parser.add_argument("--points", type=int, default=20000)
    args = parser.parse_args()

    rho, _ = random_separable(12345, 3)
    data = bloch_decomposition(rho)

    if _fastgrid is None:
        print("compiled kernel not built; timing the numpy fallback only")
    backends = [("python", reference)] + ([("cython", _fastgrid)] if _fastgrid else [])

    print(f"{'scan':<14}{'points':>12}" + "".join(f"{name:>14}" for name, _ in backends)
          + ("" if _fastgrid is None else f"{'speedup':>10}"))
    for gn in args.grid_n:
        axes, _, _ = _grid_axes(gn)
        n = axes.shape[0] ** 2
        times = [_bench_grid(impl, data, axes) for _, impl in backends]
        row = f"{'grid_n=' + str(gn):<14}{n:>12,}"
        for t in times:
            row += f"{t * 1e9 / n:>11.1f} ns"
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)

    times = [_bench_point(impl, data, _grid_axes(16)[0], args.points) for _, impl in backends]
    row = f"{'point eval':<14}{args.points:>12,}"
    for t in times:
        row += f"{t * 1e6 / args.points:>11.2f} us"
    if len(times) == 2:
        row += f"{times[0] / times[1]:>9.1f}x"
    print(row)

    if _fastgrid is not None:
        axes, _, _ = _grid_axes(16)
        v1, i1 = _fastgrid.grid_scan(*data, axes, axes, 5)
        v2, i2 = reference.grid_scan(*data, axes, axes, 5)
        print(f"cross-check: max |dH| = {np.abs(v1 - v2).max():.2e} over top-5 candidates")


if __name__ == "__main__":
    main()
