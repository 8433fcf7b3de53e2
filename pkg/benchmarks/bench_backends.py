#!/usr/bin/env python3
"""Timing comparison of the numba kernels against the numpy fallbacks.

Covers the two hot paths: the tensor-grid quadrature behind the
brute-force amplitude oracle and the banded LU factor/solve behind the
determinant and source-term evaluation.  Run from the repository root:

    python3 benchmarks/bench_backends.py [--repeats 3]
"""

import argparse
import time

import numpy as np

from pathamp import _kernels_numpy as knp

try:
    from pathamp import _kernels_numba as knb
except ImportError:
    knb = None


def time_call(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def trapezoid(half_width, points):
    nodes = np.linspace(-half_width, half_width, points)
    h = nodes[1] - nodes[0]
    w = np.full(points, h)
    w[0] = w[-1] = 0.5 * h
    return nodes, w


def grid_cases():
    rng = np.random.RandomState(0)
    for dim, points, eps in ((2, 801, 0.1), (3, 201, 0.05)):
        a = rng.randn(dim, dim)
        a = -(0.5 * (a + a.T) + 1.5 * np.eye(dim)) + 1j * eps * np.eye(dim)
        j = rng.randn(dim) * 0.3
        nodes, w = trapezoid(8.0 / np.sqrt(eps), points)
        yield f"grid dim={dim} {points}^{dim} nodes", (a, j, nodes, w)


def band_cases():
    rng = np.random.RandomState(1)
    for n, bw in ((2000, 4), (20000, 4), (4000, 12)):
        ab = np.zeros((3 * bw + 1, n), dtype=np.complex128)
        ab[bw:2 * bw, :] = rng.randn(bw, n)
        ab[2 * bw, :] = rng.randn(n) + 4.0 + 0.1j
        ab[2 * bw + 1:, :] = rng.randn(bw, n)
        rhs = rng.randn(n) + 0j
        yield f"banded LU n={n} bw={bw}", (ab, rhs, bw)


def run_grid(mod, args):
    return mod.grid_amplitude(*args)


def run_band(mod, args):
    ab, rhs, bw = args
    work = ab.copy()
    ipiv, _, info = mod.banded_lu_factor(work, bw)
    assert info == 0
    return mod.banded_lu_solve(work, ipiv, bw, rhs)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    opts = parser.parse_args()

    print(f"{'case':34s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    jobs = [(label, run_grid, args) for label, args in grid_cases()]
    jobs += [(label, run_band, args) for label, args in band_cases()]
    for label, runner, args in jobs:
        t_np, ref = time_call(lambda: runner(knp, args), opts.repeats)
        if knb is None:
            print(f"{label:34s} {t_np * 1e3:9.1f}ms {'n/a':>10s} {'':>8s}")
            continue
        runner(knb, args)  # warm the JIT outside the timed region
        t_nb, got = time_call(lambda: runner(knb, args), opts.repeats)
        close = np.allclose(np.atleast_1d(ref), np.atleast_1d(got),
                            rtol=1e-10, atol=1e-12)
        flag = "" if close else "  MISMATCH"
        print(f"{label:34s} {t_np * 1e3:9.1f}ms {t_nb * 1e3:9.1f}ms "
              f"{t_np / t_nb:7.1f}x{flag}")


if __name__ == "__main__":
    main()
