"""Hot numeric kernels: fixed-step RK4 propagation of a vectorized state.

The generator is a dense 25x25 complex matrix and runs for millions of steps
when chasing the slow spin-exchange timescale, so the inner loop is the one
place in the package worth compiling. The default backend is numba's @njit;
setting the environment variable ``FOURLEVEL_PURE_NUMPY=1`` (or having numba
unavailable) selects a pure-numpy loop with identical semantics.

Both backends watch the trace of the state: the generator conserves it
exactly, so measurable drift means the step size left the RK4 stability
region and the run is aborted.

``benchmarks/rk4_benchmark.py`` compares the two backends.
"""
from __future__ import annotations

import os
import warnings

import numpy as np

_TRACE_SLOTS = (0, 6, 12, 18, 24)  # diagonal positions of the column-major vec
_DRIFT_LIMIT = 1e-6
_CHECK_EVERY = 1000


def _rk4_evolve_numpy(gen: np.ndarray, state: np.ndarray, dt: float,
                      n_steps: int) -> tuple[np.ndarray, bool]:
    x = state.copy()
    trace0 = x[0] + x[6] + x[12] + x[18] + x[24]
    # divergence is reported through the drift flag; silence the float
    # warnings an exploding state would otherwise raise along the way
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(n_steps):
            k1 = gen @ x
            k2 = gen @ (x + (0.5 * dt) * k1)
            k3 = gen @ (x + (0.5 * dt) * k2)
            k4 = gen @ (x + dt * k3)
            x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if (step + 1) % _CHECK_EVERY == 0:
                drift = abs((x[0] + x[6] + x[12] + x[18] + x[24]) - trace0)
                if not drift <= _DRIFT_LIMIT:  # NaN falls through here too
                    return x, False
    drift = abs((x[0] + x[6] + x[12] + x[18] + x[24]) - trace0)
    return x, bool(drift <= _DRIFT_LIMIT)


def _make_numba_kernel():
    from numba import njit

    @njit(cache=True)
    def _rk4_evolve_numba(gen, state, dt, n_steps):  # pragma: no cover - compiled
        n = state.shape[0]
        x = state.copy()
        k1 = np.empty(n, dtype=np.complex128)
        k2 = np.empty(n, dtype=np.complex128)
        k3 = np.empty(n, dtype=np.complex128)
        k4 = np.empty(n, dtype=np.complex128)
        tmp = np.empty(n, dtype=np.complex128)
        trace0 = x[0] + x[6] + x[12] + x[18] + x[24]
        for step in range(n_steps):
            for i in range(n):
                acc = 0.0 + 0.0j
                for j in range(n):
                    acc += gen[i, j] * x[j]
                k1[i] = acc
            for i in range(n):
                tmp[i] = x[i] + 0.5 * dt * k1[i]
            for i in range(n):
                acc = 0.0 + 0.0j
                for j in range(n):
                    acc += gen[i, j] * tmp[j]
                k2[i] = acc
            for i in range(n):
                tmp[i] = x[i] + 0.5 * dt * k2[i]
            for i in range(n):
                acc = 0.0 + 0.0j
                for j in range(n):
                    acc += gen[i, j] * tmp[j]
                k3[i] = acc
            for i in range(n):
                tmp[i] = x[i] + dt * k3[i]
            for i in range(n):
                acc = 0.0 + 0.0j
                for j in range(n):
                    acc += gen[i, j] * tmp[j]
                k4[i] = acc
            for i in range(n):
                x[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            if (step + 1) % 1000 == 0:
                drift = abs((x[0] + x[6] + x[12] + x[18] + x[24]) - trace0)
                if not drift <= 1e-6:
                    return x, False
        drift = abs((x[0] + x[6] + x[12] + x[18] + x[24]) - trace0)
        return x, drift <= 1e-6

    return _rk4_evolve_numba


def _select_backend():
    if os.environ.get("FOURLEVEL_PURE_NUMPY", "").strip() in ("1", "true", "yes"):
        return "numpy", _rk4_evolve_numpy
    try:
        return "numba", _make_numba_kernel()
    except ImportError:
        warnings.warn("numba unavailable, falling back to the pure-numpy RK4 loop",
                      RuntimeWarning, stacklevel=2)
        return "numpy", _rk4_evolve_numpy


_BACKEND_NAME, _rk4_impl = _select_backend()


def active_backend() -> str:
    """Name of the selected RK4 backend: 'numba' or 'numpy'."""
    return _BACKEND_NAME


def rk4_evolve(gen: np.ndarray, state: np.ndarray, dt: float,
               n_steps: int) -> tuple[np.ndarray, bool]:
    """Advance ``state`` by ``n_steps`` classical RK4 steps of size ``dt``.

    Returns the final state and a flag that is False when trace drift above
    1e-6 (or a non-finite state) was detected, i.e. the step was unstable.
    """
    gen = np.ascontiguousarray(gen, dtype=np.complex128)
    state = np.ascontiguousarray(state, dtype=np.complex128)
    return _rk4_impl(gen, state, float(dt), int(n_steps))
