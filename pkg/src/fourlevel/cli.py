"""Command-line front end.

Subcommands: ``spectrum``, ``darkstates``, ``angle-scan``, ``steady`` and
``preset <name>``. Scenario values come from defaults, then an optional
``--config`` key-value file, then flags; a preset (subcommand or config key)
pins the drive scalars it defines. Exit codes: 0 success, 1 configuration
error (including unwritable output locations), 2 solver failure.

All emitted numbers use 17 significant digits in scientific notation so
repeated runs of the same configuration are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from multiprocessing import Pool

import numpy as np

from .errors import ConfigError, NoTransparencyAngle, SolverError
from .liouville import steady_state_analytic, steady_state_numeric
from .model import find_dark_states
from .scenarios import (PRESETS, ScenarioConfig, apply_preset, drive_config,
                        parse_config_file, polarization, relaxation)
from .spectra import (SusceptibilityPoint, chi_components, chi_of_psi,
                      dispersion, non_raman_angle_analytic,
                      non_raman_angle_numeric)
from .svgplot import render_spectrum_svg

_SPECTRUM_COLUMNS = ("delta", "re_chi_x", "im_chi_x", "re_chi_y", "im_chi_y",
                     "re_chi_psi", "im_chi_psi", "re_delta_chi", "im_delta_chi",
                     "f_abs", "n_eff")


def _num(x: float) -> str:
    return f"{x:.16e}"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # config errors exit 1, not argparse's 2
        raise ConfigError(message)


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="scenario file with 'key = value' lines")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", dest="formats", action="append",
                   choices=("csv", "json", "svg"),
                   help="output format, repeatable (default: csv)")
    p.add_argument("--omega-c", type=float, default=None,
                   help="coupling Rabi amplitude (units of the decay rate)")
    p.add_argument("--omega-r", type=float, default=None,
                   help="rf Rabi amplitude per circular channel")
    p.add_argument("--psi", type=float, default=None,
                   help="probe polarization angle in radians (rf along x)")
    p.add_argument("--gamma-ratio", type=float, default=None,
                   help="spin-exchange to decay-rate ratio")
    p.add_argument("--delta-min", type=float, default=None)
    p.add_argument("--delta-max", type=float, default=None)
    p.add_argument("--delta-points", type=int, default=None)
    p.add_argument("--workers", type=int, default=None,
                   help="worker processes for sweeps (default 1)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="fourlevel",
                     description="Degenerate four-level atom: steady states, "
                                 "dark states and probe susceptibility spectra.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_spec = sub.add_parser("spectrum", help="susceptibility sweep over detuning")
    _add_common_flags(p_spec)

    p_dark = sub.add_parser("darkstates", help="dark-state report over detuning")
    _add_common_flags(p_dark)
    p_dark.add_argument("--probe-amp", type=float, default=None,
                        help="probe field amplitude (0 turns the probe off)")

    p_angle = sub.add_parser("angle-scan",
                             help="resonant absorption versus polarization angle")
    _add_common_flags(p_angle)
    p_angle.add_argument("--psi-points", type=int, default=91,
                         help="number of angle samples on [0, pi/2]")

    p_steady = sub.add_parser("steady", help="driven steady state, numeric and closed form")
    _add_common_flags(p_steady)

    p_preset = sub.add_parser("preset", help="run a reference spectrum scenario")
    p_preset.add_argument("name", choices=sorted(PRESETS))
    _add_common_flags(p_preset)
    return parser


def _build_scenario(args: argparse.Namespace, preset_name: str | None = None) -> ScenarioConfig:
    values: dict = {}
    if args.config:
        values.update(parse_config_file(args.config))
    flag_map = {
        "omega_c": args.omega_c,
        "omega_r": args.omega_r,
        "psi": args.psi,
        "gamma_ratio": args.gamma_ratio,
        "delta_min": args.delta_min,
        "delta_max": args.delta_max,
        "delta_points": args.delta_points,
        "workers": args.workers,
    }
    for key, val in flag_map.items():
        if val is not None:
            values[key] = val
    if args.formats:
        values["outputs"] = tuple(dict.fromkeys(args.formats))
    if preset_name is not None:
        values["preset"] = preset_name
    grid_overridden = any(k in values for k in ("delta_min", "delta_max", "delta_points"))
    try:
        sc = ScenarioConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return apply_preset(sc, grid_overridden=grid_overridden)


def _ensure_outdir(path: str) -> str:
    try:
        os.makedirs(path, exist_ok=True)
        probe = os.path.join(path, ".write_probe")
        with open(probe, "w", encoding="utf-8"):
            pass
        os.remove(probe)
    except OSError as exc:
        raise ConfigError(f"output directory {path!r} is not writable: {exc}") from exc
    return path


def _sweep_point(payload: tuple) -> SusceptibilityPoint:
    omega_c, omega_r, psi, gamma_ratio, delta = payload
    sc = ScenarioConfig(omega_c=omega_c, omega_r=omega_r, psi=psi,
                        gamma_ratio=gamma_ratio)
    try:
        comps = chi_components(drive_config(sc), relaxation(sc), polarization(sc), delta)
    except SolverError as exc:
        raise SolverError(f"sweep failed at delta={delta}: {exc}") from exc
    return chi_of_psi(comps, psi, delta=delta)


def _run_sweep(sc: ScenarioConfig) -> list[SusceptibilityPoint]:
    payloads = [(sc.omega_c, sc.omega_r, sc.psi, sc.gamma_ratio, float(d))
                for d in sc.delta_grid()]
    if sc.workers > 1:
        with Pool(sc.workers) as pool:
            return pool.map(_sweep_point, payloads)
    return [_sweep_point(p) for p in payloads]


def _spectrum_rows(points: list[SusceptibilityPoint], psi: float) -> list[tuple]:
    rows = []
    for pt in points:
        n_eff = dispersion(pt, psi).n_eff
        rows.append((pt.delta, pt.chi_x.real, pt.chi_x.imag,
                     pt.chi_y.real, pt.chi_y.imag,
                     pt.chi_psi.real, pt.chi_psi.imag,
                     pt.delta_chi.real, pt.delta_chi.imag,
                     pt.f_abs, n_eff))
    return rows


def _write_csv(path: str, columns: tuple, rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_num(float(v)) for v in row) + "\n")


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _cmd_spectrum(sc: ScenarioConfig, out_dir: str) -> int:
    points = _run_sweep(sc)
    rows = _spectrum_rows(points, sc.psi)
    written = []
    if "csv" in sc.outputs:
        path = os.path.join(out_dir, "spectrum.csv")
        _write_csv(path, _SPECTRUM_COLUMNS, rows)
        written.append(path)
    if "json" in sc.outputs:
        path = os.path.join(out_dir, "spectrum.json")
        _write_json(path, {
            "config": sc.as_dict(),
            "points": [dict(zip(_SPECTRUM_COLUMNS, (float(v) for v in row)))
                       for row in rows],
        })
        written.append(path)
    if "svg" in sc.outputs:
        path = os.path.join(out_dir, "spectrum.svg")
        title = (sc.preset or "spectrum") + (
            f": omega_c={sc.omega_c:g}, omega_r={sc.omega_r:g}, psi={sc.psi:.4g}")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render_spectrum_svg(points, title))
        written.append(path)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_darkstates(sc: ScenarioConfig, out_dir: str, probe_amp: float | None) -> int:
    from .geometry import probe_rabi

    e_amp = probe_amp if probe_amp is not None else math.sqrt(2.0) * 1e-3
    pol = polarization(sc, e_amp=e_amp)
    op, opp = probe_rabi(pol)
    entries = []
    warning = None
    for d in sc.delta_grid():
        cfg = replace(drive_config(sc, delta=float(d)), omega_p=op, omega_p_prime=opp)
        report = find_dark_states(cfg)
        warning = report.warning or warning
        entries.append({
            "delta": float(d),
            "records": [{
                "eigenvalue": rec.eigenvalue,
                "excited_overlap": rec.excited_overlap,
                "kind": rec.kind,
                "eigenvector_re": [float(v.real) for v in rec.eigenvector],
                "eigenvector_im": [float(v.imag) for v in rec.eigenvector],
            } for rec in report.records],
        })
    payload = {"config": sc.as_dict(), "probe_amplitude": e_amp,
               "warning": warning, "points": entries}
    path = os.path.join(out_dir, "darkstates.json")
    _write_json(path, payload)
    if warning:
        print(f"warning: {warning}")
    print(f"wrote {path}")
    return 0


def _cmd_angle_scan(sc: ScenarioConfig, out_dir: str, psi_points: int) -> int:
    if psi_points < 2:
        raise ConfigError("--psi-points must be at least 2")
    cfg = drive_config(sc)
    r = relaxation(sc)
    pol = polarization(sc)
    chi_x, chi_y = chi_components(cfg, r, pol, delta=0.0)

    psis = np.linspace(0.0, math.pi / 2, psi_points)
    rows = []
    for psi in psis:
        pt = chi_of_psi((chi_x, chi_y), float(psi), delta=0.0)
        rows.append((float(psi), pt.chi_psi.imag, pt.chi_psi.real))

    analytic_angle = None
    analytic_rhs = None
    message = None
    try:
        analytic_angle = non_raman_angle_analytic(sc.omega_c, sc.omega_r, sc.gamma_ratio)
    except NoTransparencyAngle as exc:
        analytic_rhs = exc.rhs
        message = "no transparency angle"
    except ValueError as exc:
        message = str(exc)

    numeric_angle = None
    if chi_x.imag * chi_y.imag < 0.0:
        numeric_angle = non_raman_angle_numeric(cfg, r, pol, bracket=(0.0, math.pi / 2))
    elif message is None:
        message = "no transparency angle"

    rel_diff = None
    if numeric_angle is not None and analytic_angle:
        rel_diff = abs(numeric_angle - analytic_angle) / analytic_angle

    path_csv = os.path.join(out_dir, "angle_scan.csv")
    _write_csv(path_csv, ("psi", "im_chi_psi", "re_chi_psi"), rows)
    path_json = os.path.join(out_dir, "angle_scan.json")
    _write_json(path_json, {
        "config": sc.as_dict(),
        "numeric_angle": numeric_angle,
        "analytic_angle": analytic_angle,
        "analytic_rhs": analytic_rhs,
        "relative_difference": rel_diff,
        "message": message,
    })
    if message:
        extra = f" (required sin^2 = {analytic_rhs:.6g})" if analytic_rhs else ""
        print(message + extra)
    else:
        print(f"transparency angle: numeric {numeric_angle:.8f} rad, "
              f"closed form {analytic_angle:.8f} rad")
    print(f"wrote {path_csv}")
    print(f"wrote {path_json}")
    return 0


def _cmd_steady(sc: ScenarioConfig, out_dir: str) -> int:
    cfg = drive_config(sc)
    r = relaxation(sc)
    numeric = steady_state_numeric(cfg, r)
    analytic = steady_state_analytic(cfg, r)
    herm = 0.5 * (numeric + numeric.conj().T)
    payload = {
        "config": sc.as_dict(),
        "numeric_re": numeric.real.tolist(),
        "numeric_im": numeric.imag.tolist(),
        "analytic_re": analytic.real.tolist(),
        "analytic_im": analytic.imag.tolist(),
        "max_abs_difference": float(np.max(np.abs(numeric - analytic))),
        "trace": float(np.trace(numeric).real),
        "min_eigenvalue": float(np.min(np.linalg.eigvalsh(herm))),
    }
    path = os.path.join(out_dir, "steady.json")
    _write_json(path, payload)
    print(f"wrote {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        preset_name = args.name if args.command == "preset" else None
        sc = _build_scenario(args, preset_name=preset_name)
        out_dir = _ensure_outdir(args.out)
        if args.command in ("spectrum", "preset"):
            return _cmd_spectrum(sc, out_dir)
        if args.command == "darkstates":
            return _cmd_darkstates(sc, out_dir, args.probe_amp)
        if args.command == "angle-scan":
            return _cmd_angle_scan(sc, out_dir, args.psi_points)
        if args.command == "steady":
            return _cmd_steady(sc, out_dir)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
