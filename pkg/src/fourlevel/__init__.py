"""Simulation and analysis of a degenerate four-level atom driven by a
coupling laser, a probe laser and an rf field: dark-state structure, driven
steady states, linear probe response and polarization-resolved
susceptibility spectra. All frequencies in units of the excited-state decay
rate; susceptibilities in the natural density-dipole unit."""

from ._kernels import active_backend
from .errors import AnisotropyError, ConfigError, NoTransparencyAngle, SolverError
from .geometry import (PolarizationConfig, dressed_rabi_geometric, probe_rabi,
                       rf_rabi)
from .liouville import (LinearResponse, RelaxationParams, build_generator,
                        coherent_superop, linear_response, probe_potential,
                        recommended_step, spin_exchange_superop,
                        spontaneous_superop, steady_state_analytic,
                        steady_state_numeric, time_evolve, unvec, vec)
from .model import (DarkStateRecord, DarkStateReport, DressedBasis,
                    DriveConfig, build_h0, build_hamiltonian, dressed_basis,
                    find_dark_states, light_shift)
from .scenarios import PRESETS, ScenarioConfig, apply_preset
from .spectra import (DispersionPoint, SusceptibilityPoint, absorption_rate,
                      chi_components, chi_of_psi, dispersion,
                      im_chi_resonant_analytic, non_raman_angle_analytic,
                      non_raman_angle_numeric, spectrum_sweep)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "active_backend",
    "AnisotropyError", "ConfigError", "NoTransparencyAngle", "SolverError",
    "PolarizationConfig", "probe_rabi", "rf_rabi", "dressed_rabi_geometric",
    "RelaxationParams", "LinearResponse", "build_generator",
    "coherent_superop", "spontaneous_superop", "spin_exchange_superop",
    "steady_state_numeric", "steady_state_analytic", "linear_response",
    "probe_potential", "time_evolve", "recommended_step", "vec", "unvec",
    "DriveConfig", "DressedBasis", "DarkStateRecord", "DarkStateReport",
    "build_hamiltonian", "build_h0", "light_shift", "dressed_basis",
    "find_dark_states",
    "ScenarioConfig", "PRESETS", "apply_preset",
    "SusceptibilityPoint", "DispersionPoint", "chi_components", "chi_of_psi",
    "absorption_rate", "dispersion", "im_chi_resonant_analytic",
    "non_raman_angle_analytic", "non_raman_angle_numeric", "spectrum_sweep",
]
