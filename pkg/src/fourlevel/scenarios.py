"""Scenario configuration: presets, config files and derived objects.

A scenario pins the scalar drive parameters (coupling and rf amplitudes,
probe polarization angle, exchange-to-decay ratio) plus the detuning grid
and output formats. Presets reproduce the four reference parameter sets:

    fig2a   coupling 4, rf off,   probe parallel      (single resonance)
    fig2b   coupling 4, rf 1,     probe perpendicular (triple structure)
    fig3a   coupling 1, rf 0.1,   probe perpendicular (triple, rf-induced)
    fig3b   coupling 0.1, rf 0.01, probe perpendicular (double, rf-induced)

The scenario rf amplitude is the common value of the two circular rf
channels (rf field linear along x), so the dressed splitting is
omega_r / sqrt(2) and the default grid spans that splitting with margin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError
from .geometry import PolarizationConfig
from .liouville import RelaxationParams
from .model import DriveConfig
from .spectra import PROBE_SOLVE_AMPLITUDE

_SQRT2 = math.sqrt(2.0)

VALID_OUTPUTS = ("csv", "json", "svg")

PRESETS: dict[str, dict[str, float]] = {
    "fig2a": {"omega_c": 4.0, "omega_r": 0.0, "psi": 0.0},
    "fig2b": {"omega_c": 4.0, "omega_r": 1.0, "psi": math.pi / 2},
    "fig3a": {"omega_c": 1.0, "omega_r": 0.1, "psi": math.pi / 2},
    "fig3b": {"omega_c": 0.1, "omega_r": 0.01, "psi": math.pi / 2},
}

DEFAULT_GAMMA_RATIO = 1e-4
DEFAULT_DELTA_POINTS = 801


@dataclass(frozen=True)
class ScenarioConfig:
    omega_c: float = 1.0
    omega_r: float = 0.0
    psi: float = 0.0
    gamma_ratio: float = DEFAULT_GAMMA_RATIO
    delta_min: float = -2.0
    delta_max: float = 2.0
    delta_points: int = DEFAULT_DELTA_POINTS
    outputs: tuple[str, ...] = ("csv",)
    preset: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.delta_points < 2:
            raise ConfigError("delta_points must be at least 2")
        if not self.delta_min < self.delta_max:
            raise ConfigError("delta_min must be below delta_max")
        if not self.gamma_ratio > 0:
            raise ConfigError("gamma_ratio must be positive")
        if self.omega_c < 0 or self.omega_r < 0:
            raise ConfigError("omega_c and omega_r must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        bad = [o for o in self.outputs if o not in VALID_OUTPUTS]
        if bad:
            raise ConfigError(f"unknown output format(s): {', '.join(bad)}")
        if self.preset is not None and self.preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {self.preset!r}; choose from {', '.join(sorted(PRESETS))}")

    @property
    def light_shift(self) -> float:
        return self.omega_r / _SQRT2

    def delta_grid(self) -> np.ndarray:
        return np.linspace(self.delta_min, self.delta_max, self.delta_points)

    def as_dict(self) -> dict:
        return {
            "omega_c": self.omega_c,
            "omega_r": self.omega_r,
            "psi": self.psi,
            "gamma_ratio": self.gamma_ratio,
            "delta_min": self.delta_min,
            "delta_max": self.delta_max,
            "delta_points": self.delta_points,
            "outputs": list(self.outputs),
            "preset": self.preset,
            "workers": self.workers,
        }


def default_grid_for(omega_r: float) -> tuple[float, float]:
    """Grid spanning twice the dressed splitting plus one decay rate."""
    span = 2.0 * omega_r / _SQRT2 + 1.0
    return -span, span


def apply_preset(sc: ScenarioConfig, grid_overridden: bool = False) -> ScenarioConfig:
    """Expand ``sc.preset``: the preset pins the scalar drive fields and the
    exchange ratio; the grid defaults follow the preset's splitting unless
    the caller explicitly set one."""
    if sc.preset is None:
        return sc
    params = PRESETS[sc.preset]
    sc = replace(sc, omega_c=params["omega_c"], omega_r=params["omega_r"],
                 psi=params["psi"], gamma_ratio=DEFAULT_GAMMA_RATIO)
    if not grid_overridden:
        lo, hi = default_grid_for(sc.omega_r)
        sc = replace(sc, delta_min=lo, delta_max=hi, delta_points=DEFAULT_DELTA_POINTS)
    return sc


def drive_config(sc: ScenarioConfig, delta: float = 0.0) -> DriveConfig:
    """Probe-free drive for the scenario.

    The rf channel pair is derived through the polarization geometry (rf
    linear along x, each circular channel of magnitude ``omega_r``) so that
    every front-end path shares one convention.
    """
    from .geometry import rf_rabi

    o_r, o_rp = rf_rabi(polarization(sc, e_amp=0.0))
    return DriveConfig(delta=delta, omega_c=sc.omega_c,
                       omega_r=o_r, omega_r_prime=o_rp)


def relaxation(sc: ScenarioConfig) -> RelaxationParams:
    return RelaxationParams(gamma_sp=1.0, gamma_ex=sc.gamma_ratio)


def polarization(sc: ScenarioConfig, e_amp: float | None = None) -> PolarizationConfig:
    """Field geometry for the scenario: rf along x sized so each rf channel
    equals ``omega_r``, probe at the scenario angle with channel amplitude
    ``PROBE_SOLVE_AMPLITUDE`` unless overridden."""
    if e_amp is None:
        e_amp = PROBE_SOLVE_AMPLITUDE * _SQRT2
    return PolarizationConfig.from_angles(e_amp=e_amp, psi=sc.psi,
                                          h_amp=_SQRT2 * sc.omega_r)


_FIELD_PARSERS = {
    "omega_c": float,
    "omega_r": float,
    "psi": float,
    "gamma_ratio": float,
    "delta_min": float,
    "delta_max": float,
    "delta_points": int,
    "workers": int,
    "preset": str,
    "outputs": lambda v: tuple(s.strip() for s in v.split(",") if s.strip()),
}


def parse_config_file(path: str) -> dict:
    """Read a flat ``key = value`` scenario file ('#' starts a comment)."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        parser = _FIELD_PARSERS.get(key)
        if parser is None:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return values
