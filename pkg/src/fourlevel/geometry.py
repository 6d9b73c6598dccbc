"""Field polarization geometry for the hydrogen-like level assignment.

The degenerate sublevels are the m = +1 / m = -1 Zeeman states of an F = 1
hyperfine level, |2> is m = 0 and |3> the F = 0 state, with the excited
state an F = 0, m = 0 level of opposite parity. With that assignment the
two probe (electric dipole) and two rf (magnetic dipole) Rabi amplitudes
are fixed circular-basis combinations of the transverse field components.

Reduced units: the dipole-over-hbar prefactors are set to one, so field
amplitudes are specified directly on the Rabi-frequency scale and everything
stays in units of the excited-state decay rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

_SQRT2 = math.sqrt(2.0)


def _finite(name: str, value: complex) -> None:
    if not (math.isfinite(complex(value).real) and math.isfinite(complex(value).imag)):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class PolarizationConfig:
    """Transverse components of the probe electric and rf magnetic fields.

    Build either from explicit (possibly elliptic) components via
    :meth:`from_components`, or from the linear-polarization angle form via
    :meth:`from_angles`: rf field along x, probe at angle ``psi`` from it in
    the x-y plane. The two forms are never mixed.

    ``psi`` is stored for convenience; for component-built configs it is the
    effective angle recovered from the normalized scalar product of the two
    polarization vectors.
    """

    ex: complex
    ey: complex
    hx: complex
    hy: complex
    psi: float

    def __post_init__(self):
        for name in ("ex", "ey", "hx", "hy"):
            _finite(name, getattr(self, name))

    @classmethod
    def from_angles(cls, e_amp: float, psi: float, h_amp: float) -> "PolarizationConfig":
        if e_amp < 0 or h_amp < 0:
            raise ValueError("field amplitudes must be non-negative")
        if not (math.isfinite(e_amp) and math.isfinite(psi) and math.isfinite(h_amp)):
            raise ValueError("field amplitudes and angle must be finite")
        return cls(ex=e_amp * math.cos(psi), ey=e_amp * math.sin(psi),
                   hx=h_amp, hy=0.0, psi=psi)

    @classmethod
    def from_components(cls, ex: complex, ey: complex,
                        hx: complex, hy: complex) -> "PolarizationConfig":
        e_amp = math.sqrt(abs(ex) ** 2 + abs(ey) ** 2)
        h_amp = math.sqrt(abs(hx) ** 2 + abs(hy) ** 2)
        if e_amp == 0.0 or h_amp == 0.0:
            psi = 0.0
        else:
            overlap = abs(ex * complex(hx).conjugate() + ey * complex(hy).conjugate())
            psi = math.acos(min(1.0, overlap / (e_amp * h_amp)))
        return cls(ex=complex(ex), ey=complex(ey), hx=complex(hx), hy=complex(hy), psi=psi)

    @property
    def e_amp(self) -> float:
        return math.sqrt(abs(self.ex) ** 2 + abs(self.ey) ** 2)

    @property
    def h_amp(self) -> float:
        return math.sqrt(abs(self.hx) ** 2 + abs(self.hy) ** 2)


def probe_rabi(p: PolarizationConfig) -> tuple[complex, complex]:
    """Probe Rabi pair (not primed, primed) from the electric components.

    These are the sigma- / sigma+ projections: (Ex + iEy)/sqrt(2) and
    (Ex - iEy)/sqrt(2). In the angle form they reduce to
    (E/sqrt(2)) e^{+i psi} and (E/sqrt(2)) e^{-i psi}.
    """
    return ((p.ex + 1j * p.ey) / _SQRT2, (p.ex - 1j * p.ey) / _SQRT2)


def rf_rabi(p: PolarizationConfig) -> tuple[complex, complex]:
    """rf Rabi pair from the magnetic components.

    The magnetic drive tips the spin about the field axis, so the effective
    drive is the quarter-turned field z x H; its circular projections are the
    verbatim ones of H with opposite quarter-turn phases on the two
    channels. This is what makes a probe parallel to the rf field blind to
    it at first order (the parallel probe addresses the superposition the
    rf leaves alone), and it is rotation covariant: turning E and H together
    leaves all observables unchanged.
    """
    return (1j * (p.hx + 1j * p.hy) / _SQRT2, -1j * (p.hx - 1j * p.hy) / _SQRT2)


def dressed_rabi_geometric(p: PolarizationConfig) -> tuple[complex, complex]:
    """Dressed probe amplitudes straight from the polarization vectors.

    The channel feeding the rf-dark superposition is -i times the scalar
    product E . H over |H| (closing for perpendicular polarizations); the
    channel feeding the split pair is the z component of the vector product
    E x conj(H) over |H|, up to sign (closing for parallel polarizations).
    Must agree with projecting :func:`probe_rabi` onto the dressed basis
    built from :func:`rf_rabi`.
    """
    h_norm = p.h_amp
    if h_norm == 0.0:
        raise ValueError("rf field required")
    omega0 = -1j * (p.ex * p.hx + p.ey * p.hy) / h_norm
    omega = (p.ey * complex(p.hx).conjugate() - p.ex * complex(p.hy).conjugate()) / h_norm
    return omega0, omega
