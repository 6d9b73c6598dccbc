"""Dissipative dynamics: superoperators, steady states, linear response.

Superoperators are dense 25x25 complex matrices acting on the column-major
vectorization of 5x5 matrices (slot of entry (i, j) is i + 5j). The assembled
generator is

    d rho / dt = -i [H0, rho] + (spontaneous emission) + (spin exchange)

with the relaxation maps written exactly as rate equations: the excited
population decays at the full rate and feeds the four lower states in equal
quarters, optical coherences decay at half the rate, and the linear
spin-exchange terms redistribute lower-state populations and coherences at
the exchange rate while leaving optical coherences untouched. This sign
arrangement is the stable one (relaxation damps) and its kernel reproduces
the closed-form driven steady state, including the phase of the
coupling-transition coherence.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from ._kernels import rk4_evolve
from .errors import SolverError
from .model import DIM, IDX_1, IDX_1P, IDX_2, IDX_3, IDX_4, DriveConfig, build_h0

N_VEC = DIM * DIM

_RESPONSE_RESIDUAL_TOL = 1e-9
_COND_LIMIT = 1e12


def vec(mat: np.ndarray) -> np.ndarray:
    """Column-major vectorization (stacks columns)."""
    return np.asarray(mat, dtype=complex).reshape(N_VEC, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(DIM, DIM, order="F")


def _slot(i: int, j: int) -> int:
    return i + DIM * j


_TRACE_ROW = np.zeros(N_VEC, dtype=complex)
for _i in range(DIM):
    _TRACE_ROW[_slot(_i, _i)] = 1.0


@dataclass(frozen=True)
class RelaxationParams:
    """Decay rates in reduced units: ``gamma_sp`` is the excited-state decay
    rate (the unit itself, so normally 1) and ``gamma_ex`` the spin-exchange
    rate, typically a few 1e-4 for a dense gas at room temperature."""

    gamma_sp: float = 1.0
    gamma_ex: float = 1e-4

    def __post_init__(self):
        if not (math.isfinite(self.gamma_sp) and math.isfinite(self.gamma_ex)):
            raise ValueError("relaxation rates must be finite")
        if self.gamma_sp < 0 or self.gamma_ex < 0:
            raise ValueError("relaxation rates must be non-negative")


def spontaneous_superop(r: RelaxationParams) -> np.ndarray:
    """Spontaneous-emission map: excited population decays at gamma_sp and
    feeds each lower state in equal quarters; optical coherences decay at
    gamma_sp / 2; everything else is untouched."""
    g = r.gamma_sp
    s = np.zeros((N_VEC, N_VEC), dtype=complex)
    s[_slot(IDX_4, IDX_4), _slot(IDX_4, IDX_4)] = -g
    for b in (IDX_1, IDX_1P, IDX_2, IDX_3):
        s[_slot(b, b), _slot(IDX_4, IDX_4)] = 0.25 * g
        s[_slot(IDX_4, b), _slot(IDX_4, b)] = -0.5 * g
        s[_slot(b, IDX_4), _slot(b, IDX_4)] = -0.5 * g
    return s


def spin_exchange_superop(r: RelaxationParams, optical_dephasing: float = 0.0) -> np.ndarray:
    """Linear spin-exchange map for the lower-state manifold.

    Populations relax toward equipartition, the m-changing coherence pair
    (sigma_21, sigma_1'2) exchanges, the coherence between the degenerate
    sublevels decays at twice the rate, and coherences against |3> decay at
    the rate itself. Conjugate entries are generated explicitly so the map
    preserves Hermiticity. Optical coherences (row/column of the excited
    state) receive no contribution; ``optical_dephasing`` adds an optional
    extra decay rate there for sensitivity studies, off by default.
    """
    g = r.gamma_ex
    s = np.zeros((N_VEC, N_VEC), dtype=complex)

    pops = (IDX_1, IDX_1P, IDX_2, IDX_3)
    # d s_11 and d s_1'1' : -(g/2)(s11 + s1'1' - s22 - s33)
    for target in (IDX_1, IDX_1P):
        row = _slot(target, target)
        s[row, _slot(IDX_1, IDX_1)] -= 0.5 * g
        s[row, _slot(IDX_1P, IDX_1P)] -= 0.5 * g
        s[row, _slot(IDX_2, IDX_2)] += 0.5 * g
        s[row, _slot(IDX_3, IDX_3)] += 0.5 * g
    # d s_22 : -(g/2)(3 s22 - s11 - s1'1' - s33), and the same with 2 <-> 3
    for target in (IDX_2, IDX_3):
        row = _slot(target, target)
        for b in pops:
            s[row, _slot(b, b)] += 0.5 * g
        s[row, _slot(target, target)] -= 2.0 * g  # net -3g/2 on the diagonal

    # exchanging coherence pair and its conjugate pair
    s[_slot(IDX_2, IDX_1), _slot(IDX_2, IDX_1)] -= g
    s[_slot(IDX_2, IDX_1), _slot(IDX_1P, IDX_2)] += g
    s[_slot(IDX_1P, IDX_2), _slot(IDX_1P, IDX_2)] -= g
    s[_slot(IDX_1P, IDX_2), _slot(IDX_2, IDX_1)] += g
    s[_slot(IDX_1, IDX_2), _slot(IDX_1, IDX_2)] -= g
    s[_slot(IDX_1, IDX_2), _slot(IDX_2, IDX_1P)] += g
    s[_slot(IDX_2, IDX_1P), _slot(IDX_2, IDX_1P)] -= g
    s[_slot(IDX_2, IDX_1P), _slot(IDX_1, IDX_2)] += g

    # coherence between the degenerate sublevels
    s[_slot(IDX_1P, IDX_1), _slot(IDX_1P, IDX_1)] -= 2.0 * g
    s[_slot(IDX_1, IDX_1P), _slot(IDX_1, IDX_1P)] -= 2.0 * g

    # coherences against |3>
    for a in (IDX_1, IDX_1P, IDX_2):
        s[_slot(IDX_3, a), _slot(IDX_3, a)] -= g
        s[_slot(a, IDX_3), _slot(a, IDX_3)] -= g

    if optical_dephasing:
        for b in (IDX_1, IDX_1P, IDX_2, IDX_3):
            s[_slot(IDX_4, b), _slot(IDX_4, b)] -= optical_dephasing
            s[_slot(b, IDX_4), _slot(b, IDX_4)] -= optical_dephasing
    return s


def coherent_superop(h: np.ndarray) -> np.ndarray:
    """Vectorized form of X -> i [h, X] for Hermitian ``h``."""
    h = np.asarray(h, dtype=complex)
    if h.shape != (DIM, DIM):
        raise ValueError(f"expected a {DIM}x{DIM} matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if np.max(np.abs(h - h.conj().T)) > 1e-12 * scale:
        raise ValueError("coherent_superop requires a Hermitian matrix")
    eye = np.eye(DIM, dtype=complex)
    return 1j * (np.kron(eye, h) - np.kron(h.T, eye))


def build_generator(cfg: DriveConfig, r: RelaxationParams,
                    optical_dephasing: float = 0.0) -> np.ndarray:
    """Assembled generator of d rho/dt for the probe-free Hamiltonian.

    The commutator enters as -i[H0, .], i.e. minus :func:`coherent_superop`;
    with the relaxation maps above this is the damping sign under which the
    driven gas relaxes to its steady state.
    """
    h0 = build_h0(cfg)
    return (spontaneous_superop(r)
            + spin_exchange_superop(r, optical_dephasing=optical_dephasing)
            - coherent_superop(h0))


def _preparation_constraints(cfg: DriveConfig) -> list[tuple[int, np.ndarray]]:
    """Extra constraint rows pinning quantities the generator conserves.

    With both rf channels off the two degenerate sublevels obey identical
    equations, so their population difference never relaxes; the physical
    (unpolarized) preparation has it equal to zero. With the coupling also
    off at zero detuning the sums of the exchanging coherence pairs are
    conserved as well. Each constraint replaces a row that is exactly
    linearly dependent under the same condition, so no information is lost.
    """
    constraints: list[tuple[int, np.ndarray]] = []
    rf_off = cfg.omega_r == 0 and cfg.omega_r_prime == 0
    if rf_off:
        row = np.zeros(N_VEC, dtype=complex)
        row[_slot(IDX_1, IDX_1)] = 1.0
        row[_slot(IDX_1P, IDX_1P)] = -1.0
        constraints.append((_slot(IDX_1P, IDX_1P), row))
        if cfg.omega_c == 0 and cfg.delta == 0:
            row = np.zeros(N_VEC, dtype=complex)
            row[_slot(IDX_2, IDX_1)] = 1.0
            row[_slot(IDX_1P, IDX_2)] = 1.0
            constraints.append((_slot(IDX_1P, IDX_2), row))
            row = np.zeros(N_VEC, dtype=complex)
            row[_slot(IDX_1, IDX_2)] = 1.0
            row[_slot(IDX_2, IDX_1P)] = 1.0
            constraints.append((_slot(IDX_2, IDX_1P), row))
    return constraints


def _bordered_solve(gen: np.ndarray, rhs: np.ndarray, trace_value: float,
                    constraints: list[tuple[int, np.ndarray]]) -> np.ndarray:
    """Solve gen @ x = rhs with redundant rows replaced by constraints.

    The generator conserves the trace, so its diagonal rows are linearly
    dependent and replacing one of them by the trace row removes that kernel
    direction without losing information; ``constraints`` handles the extra
    conserved quantities of degenerate drive configurations the same way.
    """
    a = gen.copy()
    a[0, :] = _TRACE_ROW
    b = rhs.copy()
    b[0] = trace_value
    for slot, row in constraints:
        a[slot, :] = row
        b[slot] = 0.0
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"singular bordered system: {exc}") from exc
    cond = np.linalg.cond(a)
    if cond > _COND_LIMIT:
        raise SolverError(
            "rank deficiency beyond the known kernel: bordered system condition "
            f"number {cond:.3e} exceeds {_COND_LIMIT:.0e}")
    return x


def steady_state_numeric(cfg: DriveConfig, r: RelaxationParams) -> np.ndarray:
    """Driven steady state from the dense generator (probe terms ignored).

    For drive configurations with exactly conserved quantities (rf off, or
    everything off) the unpolarized member of the steady-state family is
    selected; see :func:`_preparation_constraints`.
    """
    gen = build_generator(cfg, r)
    x = _bordered_solve(gen, np.zeros(N_VEC, dtype=complex), 1.0,
                        _preparation_constraints(cfg))
    residual = float(np.linalg.norm(gen @ x))
    if residual > _RESPONSE_RESIDUAL_TOL:
        cond = np.linalg.cond(gen)
        raise SolverError(
            f"steady-state residual {residual:.3e} above tolerance "
            f"(generator condition number {cond:.3e})")
    return unvec(x)


def steady_state_analytic(cfg: DriveConfig, r: RelaxationParams) -> np.ndarray:
    """Closed-form steady state of the coupling + spin-exchange balance.

    Depends only on the coupling amplitude and the two rates; the probe
    detuning and the rf field drop out because the rf block acts on equal
    populations. With both the coupling and the exchange rate zero the state
    is undetermined and equipartition over the lower states is returned with
    a warning.
    """
    g = r.gamma_ex
    big_g = r.gamma_sp
    oc = cfg.omega_c
    denom = 8.0 * big_g**2 * g + 10.0 * oc**2 * g + 3.0 * big_g * oc**2
    rho = np.zeros((DIM, DIM), dtype=complex)
    if denom == 0.0:
        warnings.warn("steady state undetermined (no coupling and no spin "
                      "exchange); returning lower-state equipartition",
                      RuntimeWarning, stacklevel=2)
        for b in (IDX_1, IDX_1P, IDX_2, IDX_3):
            rho[b, b] = 0.25
        return rho
    r11 = (2.0 * g * (big_g**2 + oc**2) + oc**2 * big_g) / denom
    r22 = 2.0 * g * (big_g**2 + oc**2) / denom
    r44 = 2.0 * g * oc**2 / denom
    rho[IDX_1, IDX_1] = r11
    rho[IDX_1P, IDX_1P] = r11
    rho[IDX_3, IDX_3] = r11
    rho[IDX_2, IDX_2] = r22
    rho[IDX_4, IDX_4] = r44
    if oc > 0.0:
        rho[IDX_4, IDX_2] = 1j * big_g / oc * r44
        rho[IDX_2, IDX_4] = -1j * big_g / oc * r44
    return rho


@dataclass(frozen=True)
class LinearResponse:
    """First-order density correction per the driving probe, with the norm
    of the defect of the linear system it solves."""

    sigma: np.ndarray
    residual: float


def probe_potential(cfg: DriveConfig) -> np.ndarray:
    """Probe coupling operator: -1/2 times each probe amplitude plus h.c."""
    v = np.zeros((DIM, DIM), dtype=complex)
    v[IDX_4, IDX_1] = -0.5 * cfg.omega_p
    v[IDX_4, IDX_1P] = -0.5 * cfg.omega_p_prime
    v[IDX_1, IDX_4] = -0.5 * complex(cfg.omega_p).conjugate()
    v[IDX_1P, IDX_4] = -0.5 * complex(cfg.omega_p_prime).conjugate()
    return v


def linear_response(cfg: DriveConfig, r: RelaxationParams,
                    rho: np.ndarray) -> LinearResponse:
    """First-order response of the prepared gas to the probe in ``cfg``.

    Solves  generator @ sigma = i [V, rho]  with the traceless constraint
    replacing the redundant row; the commutator on the right is exactly
    traceless, which is what makes the singular system solvable.
    """
    gen = build_generator(cfg, r)
    v = probe_potential(cfg)
    rhs_mat = 1j * (v @ rho - rho @ v)
    rhs = vec(rhs_mat)
    x = _bordered_solve(gen, rhs, 0.0, _preparation_constraints(cfg))
    residual = float(np.linalg.norm(gen @ x - rhs))
    if residual > _RESPONSE_RESIDUAL_TOL:
        cond = np.linalg.cond(gen)
        raise SolverError(
            f"ill-conditioned response solve: residual {residual:.3e}, "
            f"generator condition number {cond:.3e}")
    return LinearResponse(sigma=unvec(x), residual=residual)


def recommended_step(cfg: DriveConfig) -> float:
    """Conservative RK4 step for accurate transients.

    Scales with the fastest frequency in the problem. Convergence to the
    steady state only needs stability, so several times this value is still
    safe there; see :func:`time_evolve`.
    """
    from .model import light_shift

    fastest = max(1.0, cfg.omega_c, light_shift(cfg), abs(cfg.delta))
    return 0.05 / fastest


def time_evolve(cfg: DriveConfig, r: RelaxationParams, rho0: np.ndarray,
                t_final: float, dt: float) -> np.ndarray:
    """Integrate d rho/dt = generator @ rho with fixed-step classical RK4.

    Brute-force dynamical route to the steady state, independent of the
    algebraic solvers. The step count is round(t_final / dt). The generator
    conserves the trace exactly, so trace drift is pure instability
    diagnostics: drift beyond 1e-6 aborts with an error. For a stable step
    the RK4 fixed point coincides with the exact steady state, so runs to
    many exchange times converge regardless of the step's local accuracy.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (DIM, DIM):
        raise ValueError(f"expected a {DIM}x{DIM} initial state, got {rho0.shape}")
    if np.max(np.abs(rho0 - rho0.conj().T)) > 1e-10:
        raise ValueError("initial state must be Hermitian")
    if abs(np.trace(rho0) - 1.0) > 1e-10:
        raise ValueError("initial state must have unit trace")
    if not (dt > 0 and math.isfinite(dt)):
        raise ValueError("dt must be positive and finite")
    if t_final < 0:
        raise ValueError("t_final must be non-negative")

    gen = build_generator(cfg, r)
    n_steps = int(round(t_final / dt))
    x, ok = rk4_evolve(gen, vec(rho0), dt, n_steps)
    if not ok:
        raise SolverError(
            f"trace drift above 1e-6 after <= {n_steps} steps of dt={dt}: "
            "step size outside the RK4 stability region")
    return unvec(x)
