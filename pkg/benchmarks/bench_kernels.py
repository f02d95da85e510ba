#!/usr/bin/env python3
"""Throughput of the numba kernel vs the pure-numpy fallback.

Times the midpoint-product kernel on the two workload shapes that dominate
real sweeps: the 5-qubit modulated single-qubit gate (32-dim, many cheap
steps) and the 8-qubit two-pair exchange block (256-dim, BLAS-bound steps).

Run:  python benchmarks/bench_kernels.py [--steps N] [--repeats R]

The production dispatch honors ZZMIT_PURE_NUMPY=1; here both paths are
invoked explicitly so one run prints the comparison.
"""

import argparse
import time

import numpy as np

from zzmit import isolated_x90, parallel_swap
from zzmit._kernels import (_build_numba_kernel, propagate_product_numpy)


def workload(scenario, eta_ratio, n_steps):
    sched = scenario.schedule(eta_ratio)
    step = sched.steps[0]
    mats, envs = step.hamiltonian.term_arrays()
    dt = step.duration / n_steps
    mids = (np.arange(n_steps) + 0.5) * dt
    coeffs = np.empty((n_steps, len(envs)))
    for j, env in enumerate(envs):
        coeffs[:, j] = env.value(mids)
    return np.ascontiguousarray(mats), np.ascontiguousarray(coeffs), dt


def time_fn(fn, *args, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=1024)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    numba_kernel = _build_numba_kernel()
    cases = [
        ("isolated gate, 32-dim", isolated_x90(k=4), 0.1),
        ("parallel SWAP, 256-dim", parallel_swap(k=4), 0.05),
    ]
    print(f"{'workload':<26} {'steps':>6} {'numba':>12} {'numpy':>12} {'speedup':>8}")
    for name, scenario, ratio in cases:
        n = args.steps if scenario.register.dim < 100 else max(64, args.steps // 4)
        mats, coeffs, dt = workload(scenario, ratio, n)
        numba_kernel(mats, coeffs[:4], dt)          # compile outside the clock
        t_nb, u_nb = time_fn(numba_kernel, mats, coeffs, dt, repeats=args.repeats)
        t_np, u_np = time_fn(propagate_product_numpy, mats, coeffs, dt,
                             repeats=args.repeats)
        agree = np.abs(u_nb - u_np).max()
        print(f"{name:<26} {n:>6} {t_nb * 1e3:>9.1f} ms {t_np * 1e3:>9.1f} ms "
              f"{t_np / t_nb:>7.2f}x   (paths agree to {agree:.1e})")


if __name__ == "__main__":
    main()
