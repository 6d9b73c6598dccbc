#!/usr/bin/env python3
"""Benchmark the compiled RK4 kernel against the pure-numpy fallback.

The propagation kernel is the only hot loop in the package: reaching the
spin-exchange steady state dynamically takes millions of fixed RK4 steps on
a 25-component state. Run:

    python benchmarks/rk4_benchmark.py [--steps N] [--dt DT]

The same comparison is what the FOURLEVEL_PURE_NUMPY=1 environment flag
switches at import time for the whole package.
"""
import argparse
import math
import time

import numpy as np

from fourlevel import DriveConfig, PolarizationConfig, RelaxationParams, rf_rabi
from fourlevel._kernels import _make_numba_kernel, _rk4_evolve_numpy
from fourlevel.liouville import build_generator, vec


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--steps", type=int, default=200_000,
                        help="RK4 steps per timed run")
    parser.add_argument("--dt", type=float, default=0.25, help="step size")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repetitions (best is reported)")
    args = parser.parse_args()

    orr, orp = rf_rabi(PolarizationConfig.from_angles(0.0, 0.0, math.sqrt(2.0)))
    cfg = DriveConfig(omega_c=4.0, omega_r=orr, omega_r_prime=orp)
    gen = np.ascontiguousarray(build_generator(cfg, RelaxationParams()))
    state = np.ascontiguousarray(vec(np.diag([1.0, 0, 0, 0, 0]).astype(complex)))

    try:
        numba_kernel = _make_numba_kernel()
    except ImportError:
        numba_kernel = None
        print("numba not available; benchmarking the numpy path only")

    results = {}
    if numba_kernel is not None:
        numba_kernel(gen, state, args.dt, 10)  # compile outside the timing
        best = math.inf
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            out_nb, ok = numba_kernel(gen, state, args.dt, args.steps)
            best = min(best, time.perf_counter() - t0)
        assert ok
        results["numba @njit"] = best

    best = math.inf
    for _ in range(args.repeats):
        t0 = time.perf_counter()
        out_np, ok = _rk4_evolve_numpy(gen, state, args.dt, args.steps)
        best = min(best, time.perf_counter() - t0)
    assert ok
    results["pure numpy"] = best

    if numba_kernel is not None:
        drift = float(np.max(np.abs(out_nb - out_np)))
        print(f"backend agreement: max |difference| = {drift:.3e}")

    print(f"\n{args.steps} RK4 steps of a 25x25 complex generator (dt={args.dt}):")
    for name, elapsed in results.items():
        rate = args.steps / elapsed
        print(f"  {name:12s} {elapsed:8.3f} s   ({rate:,.0f} steps/s)")
    if len(results) == 2:
        speedup = results["pure numpy"] / results["numba @njit"]
        print(f"  speedup: {speedup:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
