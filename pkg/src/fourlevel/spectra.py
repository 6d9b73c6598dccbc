"""Probe susceptibility, absorption/refraction observables and the
transparency-angle analysis.

Unit convention and extraction
------------------------------
Susceptibilities are reported in the natural unit lambda = sqrt(2) * (number
density) * (dipole moment)^2 / (hbar * decay rate). The probe induces the
optical coherences sigma[4,0] and sigma[4,1] (excited state against the two
degenerate sublevels); the medium polarization along x is proportional to
their sum and along y to i times their difference. Writing the probe Rabi
pair for a field of amplitude E at angle psi as (E/sqrt(2)) e^{+-i psi} and
dividing polarization by field, the lambda-unit components reduce to

    chi_x = gamma_sp * (sigma[4,0] + sigma[4,1]) / a     (x-aligned probe,
                                                          both channels = a)
    chi_y = i gamma_sp * (sigma[4,1] - sigma[4,0]) / a   (y-aligned probe,
                                                          channels +-i a)

where ``a`` is the probe channel amplitude used in the solve; it cancels by
linearity, and a small value is used only so emitted response matrices have
physically suggestive magnitudes. The two aligned solves make the diagonal
tensor extraction unambiguous and turn the predicted vanishing of the cross
component into a runtime check. The factor is validated against the
closed-form resonant absorption formula in the test suite.

The tensor is diagonal with the rf field along x, so for a probe at angle
psi the effective susceptibility is chi_x cos^2 psi + chi_y sin^2 psi, and
everything the rf field does lives in delta_chi = chi_y - chi_x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import AnisotropyError, NoTransparencyAngle, SolverError
from .geometry import PolarizationConfig, rf_rabi
from .liouville import RelaxationParams, linear_response, steady_state_numeric
from .model import IDX_1, IDX_1P, IDX_4, DriveConfig

#: probe channel amplitude for the aligned response solves; arbitrary by
#: linearity, small to keep sigma magnitudes in a physical-looking range
PROBE_SOLVE_AMPLITUDE = 1e-3

_CROSS_COMPONENT_TOL = 1e-10
_BISECTION_TOL = 1e-8


@dataclass(frozen=True)
class SusceptibilityPoint:
    """Susceptibility data at one probe detuning, all in lambda units."""

    delta: float
    chi_x: complex
    chi_y: complex
    chi_psi: complex
    delta_chi: complex
    f_abs: float


@dataclass(frozen=True)
class DispersionPoint:
    """Propagation observables in the transparent regime.

    ``n_eff`` is the refractive index to first order in the susceptibility,
    ``k2_exact`` the exact squared wavevector (in units of the vacuum one)
    from the anisotropic dispersion relation, and ``phi_psi_ratio`` the
    permittivity ratio -eps_x/eps_y that constrains the propagation angle.
    """

    n_eff: float
    k2_exact: float
    phi_psi_ratio: float


def _aligned_probe_config(base: DriveConfig, axis: str, amplitude: float) -> DriveConfig:
    if axis == "x":
        return replace(base, omega_p=amplitude, omega_p_prime=amplitude)
    return replace(base, omega_p=1j * amplitude, omega_p_prime=-1j * amplitude)


def chi_components(cfg_base: DriveConfig, r: RelaxationParams,
                   p: PolarizationConfig, delta: float) -> tuple[complex, complex]:
    """Diagonal susceptibility tensor components (chi_x, chi_y) at ``delta``.

    The rf amplitudes come from the polarization geometry ``p``; the probe
    entries of ``cfg_base`` are ignored because the extraction runs one
    x-aligned and one y-aligned response solve (see module docstring).
    Raises :class:`AnisotropyError` when either solve produces a relative
    cross-polarization component above 1e-10.
    """
    o_r, o_rp = rf_rabi(p)
    base = replace(cfg_base, delta=delta, omega_r=o_r, omega_r_prime=o_rp,
                   omega_p=0.0, omega_p_prime=0.0)
    rho = steady_state_numeric(base, r)
    a = PROBE_SOLVE_AMPLITUDE
    g = r.gamma_sp

    sig_x = linear_response(_aligned_probe_config(base, "x", a), r, rho).sigma
    chi_x = g * (sig_x[IDX_4, IDX_1] + sig_x[IDX_4, IDX_1P]) / a
    cross_x = g * abs(sig_x[IDX_4, IDX_1P] - sig_x[IDX_4, IDX_1]) / a

    sig_y = linear_response(_aligned_probe_config(base, "y", a), r, rho).sigma
    chi_y = 1j * g * (sig_y[IDX_4, IDX_1P] - sig_y[IDX_4, IDX_1]) / a
    cross_y = g * abs(sig_y[IDX_4, IDX_1] + sig_y[IDX_4, IDX_1P]) / a

    ref = max(abs(chi_x), abs(chi_y))
    if ref > 0.0 and max(cross_x, cross_y) / ref > _CROSS_COMPONENT_TOL:
        raise AnisotropyError(
            "anisotropy model violated: cross-polarization component "
            f"{max(cross_x, cross_y):.3e} vs diagonal scale {ref:.3e} at delta={delta}")
    return chi_x, chi_y


def chi_of_psi(components: tuple[complex, complex], psi: float,
               delta: float = 0.0) -> SusceptibilityPoint:
    """Package tensor components into the angle-resolved susceptibility."""
    chi_x, chi_y = components
    c2 = math.cos(psi) ** 2
    s2 = math.sin(psi) ** 2
    chi_psi = chi_x * c2 + chi_y * s2
    return SusceptibilityPoint(delta=delta, chi_x=chi_x, chi_y=chi_y,
                               chi_psi=chi_psi, delta_chi=chi_y - chi_x,
                               f_abs=8.0 * math.pi**2 * chi_psi.imag)


def absorption_rate(point: SusceptibilityPoint) -> float:
    """Absorbed energy per oscillation period over the free-space energy
    density: 8 pi^2 times the imaginary part of the angle-resolved
    susceptibility. Negative values mean optical gain."""
    return 8.0 * math.pi**2 * point.chi_psi.imag


def dispersion(point: SusceptibilityPoint, psi: float) -> DispersionPoint:
    """Propagation observables for a probe at angle ``psi``.

    Imaginary parts are neglected (transparent-region contract); the
    permittivities are eps_a = 1 + 4 pi Re(chi_a).
    """
    eps_x = 1.0 + 4.0 * math.pi * point.chi_x.real
    eps_y = 1.0 + 4.0 * math.pi * point.chi_y.real
    c2 = math.cos(psi) ** 2
    s2 = math.sin(psi) ** 2
    denom = eps_x * c2 + eps_y * s2
    if abs(denom) < 1e-12:
        raise SolverError("propagation singular: permittivity projection vanishes")
    k2 = (eps_x**2 * c2 + eps_y**2 * s2) / denom
    n_eff = 1.0 + 2.0 * math.pi * (point.chi_x.real * c2 + point.chi_y.real * s2)
    return DispersionPoint(n_eff=n_eff, k2_exact=k2, phi_psi_ratio=-eps_x / eps_y)


def im_chi_resonant_analytic(omega_c: float, omega_r: float, gamma: float,
                             psi: float) -> float:
    """Resonant absorption in lambda units, second order in the rf drive.

    Valid for the probe exactly on resonance, rf field linear along x and
    omega_r well below omega_c; decay rate fixed to 1. The psi = 0 value is
    negative: the coupling light pumps the probe through spin exchange.
    """
    oc2 = omega_c**2
    prefactor = 4.0 * gamma / (8.0 * gamma + 3.0 * oc2 + 10.0 * oc2 * gamma)
    coeff = ((oc2 - 2.0 * gamma * oc2 + 4.0 * gamma)
             / (gamma * (oc2 + 2.0 * gamma))) * (omega_r**2 / oc2)
    return prefactor * (coeff * math.sin(psi) ** 2 - 1.0)


def non_raman_angle_analytic(omega_c: float, omega_r: float, gamma: float) -> float:
    """Polarization angle at which the resonant absorption crosses zero.

    Second-order closed form (decay rate = 1). Raises
    :class:`NoTransparencyAngle` when the required sin^2 exceeds one, i.e.
    the rf field is too weak to cancel the resonant gain.
    """
    if omega_c <= 0 or omega_r <= 0 or gamma <= 0:
        raise ValueError("omega_c, omega_r and gamma must all be positive")
    oc2 = omega_c**2
    denom = oc2 - 2.0 * gamma * oc2 + 4.0 * gamma
    numer = gamma * (oc2 + 2.0 * gamma)
    if denom <= 0 or numer <= 0:
        raise ValueError("transparency angle undefined for these parameters")
    rhs = (numer / denom) * (oc2 / omega_r**2)
    if rhs > 1.0:
        raise NoTransparencyAngle(
            f"no transparency angle: rf field too weak (required sin^2 = {rhs:.6g})",
            rhs=rhs)
    return math.asin(math.sqrt(rhs))


def non_raman_angle_numeric(cfg_base: DriveConfig, r: RelaxationParams,
                            p: PolarizationConfig,
                            bracket: tuple[float, float]) -> float:
    """Bisection root of the resonant absorption versus polarization angle.

    Uses the full numeric tensor components at zero detuning; the absorption
    is monotone in sin^2(psi), so one sign change brackets the only root.
    Resolved to 1e-8 in the angle.
    """
    chi_x, chi_y = chi_components(cfg_base, r, p, delta=0.0)

    def f(psi: float) -> float:
        return chi_x.imag * math.cos(psi) ** 2 + chi_y.imag * math.sin(psi) ** 2

    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise ValueError(
            f"no non-Raman resonance in bracket ({lo:.6g}, {hi:.6g}): "
            f"absorption does not change sign")
    while hi - lo > _BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def spectrum_sweep(cfg_base: DriveConfig, r: RelaxationParams,
                   p: PolarizationConfig,
                   delta_grid: list[float] | np.ndarray) -> list[SusceptibilityPoint]:
    """One susceptibility point per detuning, in grid order.

    Points are independent pure computations; callers may distribute them
    over workers as long as results are reassembled in input order (the CLI
    does). Solver failures are re-raised with the offending detuning.
    """
    grid = [float(d) for d in delta_grid]
    if any(not math.isfinite(d) for d in grid):
        raise ValueError("delta grid must be finite")
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise ValueError("delta grid must be sorted ascending")
    points = []
    for d in grid:
        try:
            comps = chi_components(cfg_base, r, p, d)
        except SolverError as exc:
            raise SolverError(f"sweep failed at delta={d}: {exc}") from exc
        points.append(chi_of_psi(comps, p.psi, delta=d))
    return points
