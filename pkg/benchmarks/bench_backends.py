"""Compare the compiled integration kernels against the pure-Python ones.

Runs the same trajectory with both backends and both engines on a prebuilt
coefficient table, so only the stepping loop is timed.

Usage: python3 benchmarks/bench_backends.py [--t-max 30] [--dt 1e-3] [--repeats 3]
"""

import argparse
import time

import numpy as np

from oscbath import _backend
from oscbath.bath import BathSpec, build_coefficient_table
from oscbath.dynamics import evolve
from oscbath.model import SystemParams, effective_frequencies
from oscbath.states import GhzStateSpec, ghz_initial_covariance


def time_run(v0, t_grid, table, method, freqs, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        evolve(v0, t_grid, table, method=method, freqs=freqs)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--t-max", type=float, default=30.0)
    parser.add_argument("--dt", type=float, default=1e-3)
    parser.add_argument("--coupling", type=float, default=0.8)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    params = SystemParams(n_modes=3, coupling=args.coupling)
    freqs = effective_frequencies(params)
    print(f"building coefficient table (t_max={args.t_max:g}, dt={args.dt:g}) ...")
    table = build_coefficient_table(BathSpec(), freqs, t_max=args.t_max,
                                    dt=args.dt)
    v0 = ghz_initial_covariance(GhzStateSpec(3, 1.0))
    t_grid = np.arange(int(round(args.t_max / args.dt)) + 1) * args.dt
    steps = len(t_grid) - 1

    rows = []
    for choice in ("python", "compiled"):
        try:
            _backend.set_backend(choice)
        except ImportError:
            print(f"backend {choice!r} unavailable, skipping")
            continue
        for method in ("lyapunov", "block"):
            seconds = time_run(v0, t_grid, table, method, freqs, args.repeats)
            rows.append((choice, method, seconds))
    _backend.set_backend("auto")

    print(f"\n{steps} steps, best of {args.repeats}:")
    print(f"{'backend':<10} {'engine':<10} {'seconds':>10} {'steps/s':>12}")
    for choice, method, seconds in rows:
        print(f"{choice:<10} {method:<10} {seconds:>10.4f} {steps / seconds:>12.0f}")

    by_key = {(c, m): s for c, m, s in rows}
    for method in ("lyapunov", "block"):
        py = by_key.get(("python", method))
        co = by_key.get(("compiled", method))
        if py and co:
            print(f"compiled speedup ({method}): {py / co:.1f}x")


if __name__ == "__main__":
    main()
