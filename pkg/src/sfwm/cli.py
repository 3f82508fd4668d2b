"""Command-line front end: JSON config in, CSV/JSON artifacts out.

Subcommands wrap the computation modules one-to-one::

    sfwm dispersion    --config run.json --out results/
    sfwm contour       ...
    sfwm singles       ...
    sfwm jsa           ...
    sfwm design-sweep  ...
    sfwm ndp           ...
    sfwm interference  ...

The config is a single JSON document shared by all subcommands; each reads
its own section plus the shared ``fiber``/``pump``/``length_m`` keys.  Every
key has a default (the module ledger value); unknown keys are rejected with
their full path.  Configs accept wavelengths in micrometres and powers in
watts; internals run in rad/s and SI units.

All outputs are deterministic: identical config and package version produce
byte-identical files regardless of ``--threads``.  ``--seed`` is accepted
and recorded for forward compatibility; every computation is deterministic
and no randomness is consumed.  A ``manifest.json`` with the config hash and
per-file checksums closes every successful run.

Exit codes: 0 success, 1 numeric failure, 2 config error, 3 domain/validity
error.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys

import numpy as np

from ._version import __version__
from .design import (CONTINUUM_TOL_1_M, CURVATURE_PASS_FRACTION,
                     CURVATURE_REFERENCE_S, DISCRETE_ROOT_FLOOR_1_M,
                     ENERGY_TOL_REL, NDP_SCAN_POINTS, SLOPE_PASS_LIMIT,
                     SLOPE_PROBE_FRACTION, bandwidth_sweep,
                     design_zero_dispersion_frequency, evaluate_conditions,
                     find_ndp_pairs)
from .dispersion import DispersionProfile, build_profile_um
from .errors import ConfigError, SfwmError, exit_code_for
from .interference import (DEFAULT_FLUX_POINTS, DEFAULT_JSA_POINTS,
                           DEFAULT_THETA_POINTS, MultiLinePumpSpec,
                           flux_vs_phase, jsa_multiline, marginal_intensity)
from .io import (contour_table, dispersion_table, flux_table,
                 joint_spectrum_table, singles_table, sweep_table, write_csv,
                 write_json, write_manifest)
from .phasematch import DEFAULT_CONTOUR_GRID, PumpPair, trace_contours
from .sellmeier import lambda_um_from_omega, omega_from_lambda_um
from .twophoton import (DEFAULT_GAMMA_W_M, DEFAULT_LENGTH_M, DEFAULT_POWER_W,
                        DEFAULT_SINGLES_POINTS, RAMAN_SHIFT_RAD_S,
                        bandwidth_report, jsa_cw, schmidt_report,
                        singles_spectrum)

__all__ = ["CONFIG_DEFAULTS", "RunConfig", "main"]


# --------------------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------------------

#: Full config schema with ledger defaults.  ``None`` means "derive
#: automatically" where the subcommand documents a derivation rule.
CONFIG_DEFAULTS: dict = {
    "fiber": {
        "core_radius_um": 1.8162,
        "air_fill_fraction": 0.1,
    },
    "pump": {
        # None -> the fiber's highest zero-dispersion frequency.
        "lambda_um": None,
        "power_w": DEFAULT_POWER_W,
        "gamma_w_m": DEFAULT_GAMMA_W_M,
    },
    "length_m": DEFAULT_LENGTH_M,
    "dispersion": {
        "points": 2001,
    },
    "contour": {
        "grid": DEFAULT_CONTOUR_GRID,
        # None -> the model validity window.
        "lambda_min_um": None,
        "lambda_max_um": None,
    },
    "singles": {
        "points": DEFAULT_SINGLES_POINTS,
    },
    "jsa": {
        "points": 201,
        # Ridge width of the quasi-monochromatic pump model, as a fraction
        # of the grid span; None -> the module's per-cell default.
        "ridge_width_rel": None,
        "span_fwhm_factor": 1.5,
    },
    "design_sweep": {
        # Either an explicit list of radii or a linspace specification.
        "radii_um": None,
        "radius_min_um": 1.80,
        "radius_max_um": 1.86,
        "radius_count": 13,
        "points": DEFAULT_SINGLES_POINTS,
    },
    "ndp": {
        "scan_points": NDP_SCAN_POINTS,
        "evaluate_conditions": True,
    },
    "interference": {
        # Outer pump lines: explicit wavelengths (symmetrized about the
        # centre line to satisfy the energy sum rule exactly) ...
        "lambda_ndp1_um": None,
        "lambda_ndp2_um": None,
        # ... or an explicit detuning from the centre line.
        "detuning_rad_s": None,
        "band_width_nm": 0.5,
        "theta_points": DEFAULT_THETA_POINTS,
        "flux_grid_points": DEFAULT_FLUX_POINTS,
        "jsa_grid_points": DEFAULT_JSA_POINTS,
        "emit_jsa": False,
        # Phases (rad) at which dense joint spectra / marginal singles are
        # additionally emitted.
        "emit_singles_thetas": [],
    },
    "tolerances": {
        "continuum_tol_1_m": CONTINUUM_TOL_1_M,
        "discrete_root_floor_1_m": DISCRETE_ROOT_FLOOR_1_M,
        "phasematch_tol_1_m": 2.0 * math.pi / (10.0 * DEFAULT_LENGTH_M),
        "energy_tol_rel": ENERGY_TOL_REL,
        "slope_limit": SLOPE_PASS_LIMIT,
        "slope_probe_fraction": SLOPE_PROBE_FRACTION,
        "curvature_threshold_s": CURVATURE_PASS_FRACTION
        * CURVATURE_REFERENCE_S,
        "nodes_per_band": 32,
    },
    "output_dir": "out",
    "threads": 1,
    "seed": 0,
}


def _merge_with_defaults(data: dict, defaults: dict, path: str = "") -> dict:
    """Defaults overlaid with ``data``; unknown keys rejected by full path."""
    merged = {}
    for key, default in defaults.items():
        if isinstance(default, dict):
            sub = data.get(key, {})
            if not isinstance(sub, dict):
                raise ConfigError(f"config key '{path}{key}' must be an "
                                  f"object, got {type(sub).__name__}")
            merged[key] = _merge_with_defaults(sub, default,
                                               f"{path}{key}.")
        elif key in data:
            merged[key] = copy.deepcopy(data[key])
        else:
            merged[key] = copy.deepcopy(default)
    unknown = sorted(set(data) - set(defaults))
    if unknown:
        raise ConfigError(
            "unknown config key(s): "
            + ", ".join(f"'{path}{key}'" for key in unknown))
    return merged


class RunConfig:
    """Validated run configuration with ledger defaults filled in.

    ``RunConfig.from_json(cfg.to_json())`` equals ``cfg`` (round-trip).
    """

    def __init__(self, data: dict | None = None):
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        self.data = _merge_with_defaults(data, CONFIG_DEFAULTS)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: line "
                              f"{exc.lineno} column {exc.colno}: "
                              f"{exc.msg}") from exc
        return cls(payload)

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            with open(path, "r", encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path!r}: "
                              f"{exc}") from exc
        return cls.from_json(text)

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    def __eq__(self, other) -> bool:
        return isinstance(other, RunConfig) and self.data == other.data

    def __getitem__(self, key):
        return self.data[key]


# --------------------------------------------------------------------------------------
# shared helpers
# --------------------------------------------------------------------------------------

def _build_profile(config: RunConfig) -> DispersionProfile:
    fiber = config["fiber"]
    return build_profile_um(float(fiber["core_radius_um"]),
                            float(fiber["air_fill_fraction"]))


def _pump_omega(config: RunConfig, profile: DispersionProfile) -> float:
    lam = config["pump"]["lambda_um"]
    if lam is None:
        return design_zero_dispersion_frequency(profile)
    return float(omega_from_lambda_um(float(lam)))


def _degenerate_pump(config: RunConfig, profile: DispersionProfile,
                     ) -> PumpPair:
    return PumpPair.degenerate(_pump_omega(config, profile),
                               power_w=float(config["pump"]["power_w"]),
                               gamma_w_m=float(config["pump"]["gamma_w_m"]))


def _emission_window(profile: DispersionProfile, lambda_min_um,
                     lambda_max_um) -> tuple[float, float]:
    """(omega_lo, omega_hi) from optional wavelength bounds, else validity."""
    omega_lo = profile.omega_min if lambda_max_um is None \
        else float(omega_from_lambda_um(float(lambda_max_um)))
    omega_hi = profile.omega_max if lambda_min_um is None \
        else float(omega_from_lambda_um(float(lambda_min_um)))
    omega_lo = max(omega_lo, profile.omega_min)
    omega_hi = min(omega_hi, profile.omega_max)
    if not omega_lo < omega_hi:
        from .errors import DomainError
        raise DomainError("empty frequency window after clipping to the "
                          "model validity range")
    return omega_lo, omega_hi


class _Emitter:
    """Collects emitted file names for the closing manifest."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.names: list[str] = []

    def path(self, name: str) -> str:
        self.names.append(name)
        return os.path.join(self.out_dir, name)

    def csv(self, name: str, table) -> None:
        header, rows = table
        write_csv(self.path(name), header, rows)

    def json(self, name: str, payload: dict) -> None:
        write_json(self.path(name), payload)


# --------------------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------------------

def cmd_dispersion(config: RunConfig, emitter: _Emitter) -> None:
    profile = _build_profile(config)
    points = int(config["dispersion"]["points"])
    if points < 2:
        raise ConfigError("dispersion.points must be at least 2")
    # Tiny inset keeps endpoint derivative stencils inside the window.
    inset = 1.0e-9 * (profile.omega_max - profile.omega_min)
    omega = np.linspace(profile.omega_min + inset, profile.omega_max - inset,
                        points)
    emitter.csv("dispersion.csv", dispersion_table(profile, omega))

    roots = profile.zero_dispersion_frequencies()
    omega_zd = design_zero_dispersion_frequency(profile)
    emitter.json("zd.json", {
        "omega_zd_rad_s": omega_zd,
        "lambda_zd_um": float(lambda_um_from_omega(omega_zd)),
        "all_roots_rad_s": [float(r) for r in roots],
        "all_roots_lambda_um": [float(lambda_um_from_omega(r))
                                for r in roots],
    })


def cmd_contour(config: RunConfig, emitter: _Emitter) -> None:
    profile = _build_profile(config)
    pump = _degenerate_pump(config, profile)
    section = config["contour"]
    window = _emission_window(profile, section["lambda_min_um"],
                              section["lambda_max_um"])
    contours = trace_contours(profile, pump, window, window,
                              grid=int(section["grid"]))
    emitter.csv("contours.csv", contour_table(contours))
    emitter.json("contours.json", {
        "pump": {"omega_rad_s": pump.omega1_rad_s,
                 "lambda_um": float(lambda_um_from_omega(pump.omega1_rad_s)),
                 "power_term_1_m": pump.power_term},
        "window_rad_s": list(window),
        "branches": [{"label": c.branch_label, "closed": c.closed,
                      "vertices": int(c.vertices.shape[0])}
                     for c in contours],
    })


def _raman_windows(pump_omegas) -> list[dict]:
    """Red-side geometric Raman-gain windows per pump line (metadata only)."""
    windows = []
    for omega_p in pump_omegas:
        lo = omega_p - RAMAN_SHIFT_RAD_S
        windows.append({
            "pump_omega_rad_s": float(omega_p),
            "omega_lo_rad_s": float(lo),
            "omega_hi_rad_s": float(omega_p),
            "lambda_lo_um": float(lambda_um_from_omega(omega_p)),
            "lambda_hi_um": float(lambda_um_from_omega(lo))
            if lo > 0.0 else None,
        })
    return windows


def cmd_singles(config: RunConfig, emitter: _Emitter) -> None:
    profile = _build_profile(config)
    pump = _degenerate_pump(config, profile)
    spectrum = singles_spectrum(profile, pump,
                                length_m=float(config["length_m"]),
                                npoints=int(config["singles"]["points"]))
    report = bandwidth_report(spectrum)
    emitter.csv("singles.csv", singles_table(spectrum))
    payload = report.to_dict()
    payload["raman_windows"] = _raman_windows(sorted({pump.omega1_rad_s,
                                                      pump.omega2_rad_s}))
    emitter.json("bandwidth.json", payload)


def cmd_jsa(config: RunConfig, emitter: _Emitter) -> None:
    profile = _build_profile(config)
    pump = _degenerate_pump(config, profile)
    section = config["jsa"]
    points = int(section["points"])

    probe = singles_spectrum(profile, pump,
                             length_m=float(config["length_m"]))
    report = bandwidth_report(probe)
    half = float(section["span_fwhm_factor"]) * report.main_fwhm_rad_s
    center = report.omega_zd_rad_s
    lo = max(center - half, profile.omega_min)
    hi = min(center + half, profile.omega_max)
    axis = np.linspace(lo, hi, points)

    width_rel = section["ridge_width_rel"]
    width = None if width_rel is None else float(width_rel) * (hi - lo)
    spectrum = jsa_cw(profile, pump, float(config["length_m"]),
                      axis, axis.copy(), ridge_width_rad_s=width)
    schmidt = schmidt_report(spectrum)
    emitter.csv("jsa.csv", joint_spectrum_table(spectrum,
                                                nonzero_only=False))
    emitter.json("jsa.json", {
        "metadata": spectrum.metadata,
        "schmidt": {"schmidt_number": schmidt.schmidt_number,
                    "lower_bound_only": schmidt.lower_bound_only,
                    "caveat": schmidt.caveat},
        "grid": {"points": points, "omega_lo_rad_s": float(lo),
                 "omega_hi_rad_s": float(hi)},
    })


def cmd_design_sweep(config: RunConfig, emitter: _Emitter) -> None:
    section = config["design_sweep"]
    if section["radii_um"] is not None:
        radii = [float(r) for r in section["radii_um"]]
    else:
        count = int(section["radius_count"])
        if count < 1:
            raise ConfigError("design_sweep.radius_count must be positive")
        radii = np.linspace(float(section["radius_min_um"]),
                            float(section["radius_max_um"]), count).tolist()
    rows = bandwidth_sweep(float(config["fiber"]["air_fill_fraction"]),
                           radii,
                           power_w=float(config["pump"]["power_w"]),
                           gamma_w_m=float(config["pump"]["gamma_w_m"]),
                           length_m=float(config["length_m"]),
                           npoints=int(section["points"]),
                           threads=int(config["threads"]))
    emitter.csv("sweep.csv", sweep_table(rows))
    usable = [row for row in rows if row.fwhm_main_nm is not None]
    best = max(usable, key=lambda row: row.fwhm_main_nm) if usable else None
    emitter.json("sweep.json", {
        "rows": [row.to_dict() for row in rows],
        "best": best.to_dict() if best is not None else None,
    })


def cmd_ndp(config: RunConfig, emitter: _Emitter) -> None:
    profile = _build_profile(config)
    pump_power = float(config["pump"]["power_w"])
    gamma = float(config["pump"]["gamma_w_m"])
    tol = config["tolerances"]
    solutions = find_ndp_pairs(
        profile,
        power1_w=0.5 * pump_power, power2_w=0.5 * pump_power,
        gamma1_w_m=gamma, gamma2_w_m=gamma,
        scan_points=int(config["ndp"]["scan_points"]),
        continuum_tol_1_m=float(tol["continuum_tol_1_m"]),
        root_floor_1_m=float(tol["discrete_root_floor_1_m"]))
    payload = solutions.to_dict()
    if bool(config["ndp"]["evaluate_conditions"]):
        length = float(config["length_m"])
        reports = []
        for pair in solutions.discrete_pairs:
            pump = PumpPair(pair.omega_high_rad_s, pair.omega_low_rad_s,
                            power1_w=0.5 * pump_power,
                            power2_w=0.5 * pump_power,
                            gamma1_w_m=gamma, gamma2_w_m=gamma)
            report = evaluate_conditions(
                profile, solutions.dp_omega_rad_s, solutions.dp_omega_rad_s,
                pump,
                phasematch_tol_1_m=float(tol["phasematch_tol_1_m"]),
                energy_tol_rel=float(tol["energy_tol_rel"]),
                slope_limit=float(tol["slope_limit"]),
                curvature_threshold_s=float(tol["curvature_threshold_s"]),
                slope_probe_fraction=float(tol["slope_probe_fraction"]))
            reports.append(report.to_dict())
        payload["conditions_per_pair"] = reports
        payload["length_m"] = length
    emitter.json("ndp.json", payload)


def _interference_spec(config: RunConfig, profile: DispersionProfile,
                       ) -> MultiLinePumpSpec:
    section = config["interference"]
    omega_dp = _pump_omega(config, profile)
    lam1 = section["lambda_ndp1_um"]
    lam2 = section["lambda_ndp2_um"]
    detuning = section["detuning_rad_s"]
    if detuning is not None:
        if lam1 is not None or lam2 is not None:
            raise ConfigError("interference: give either detuning_rad_s or "
                              "the two outer wavelengths, not both")
        delta = float(detuning)
    elif lam1 is not None and lam2 is not None:
        om1 = float(omega_from_lambda_um(float(lam1)))
        om2 = float(omega_from_lambda_um(float(lam2)))
        # Symmetrize about the centre line so the energy sum rule holds
        # exactly; the shift is within the linewidth for any sensible input.
        delta = 0.5 * abs(om1 - om2)
    else:
        raise ConfigError(
            "interference: the outer pump lines are required — set either "
            "interference.detuning_rad_s or both "
            "interference.lambda_ndp1_um and interference.lambda_ndp2_um "
            "(pick a phase-matched non-degenerate pair, e.g. from the "
            "`ndp` subcommand)")
    lambda_dp_um = float(lambda_um_from_omega(omega_dp))
    band_width = (2.0 * math.pi * 299792458.0
                  * float(section["band_width_nm"]) * 1.0e-9
                  / (lambda_dp_um * 1.0e-6) ** 2)
    return MultiLinePumpSpec.symmetric(
        omega_dp, delta, band_width, theta_rad=0.0,
        total_peak_power_w=float(config["pump"]["power_w"]))


def cmd_interference(config: RunConfig, emitter: _Emitter) -> None:
    profile = _build_profile(config)
    section = config["interference"]
    spec = _interference_spec(config, profile)
    gamma = float(config["pump"]["gamma_w_m"])
    length = float(config["length_m"])
    nodes = int(config["tolerances"]["nodes_per_band"])

    theta = np.linspace(0.0, math.pi, int(section["theta_points"]))
    sweep = flux_vs_phase(profile, spec, theta, length_m=length,
                          gamma_w_m=gamma, nodes_per_band=nodes,
                          grid_points=int(section["flux_grid_points"]))
    emitter.csv("flux.csv", flux_table(sweep))
    emitter.json("flux.json", sweep.to_dict())

    dense_thetas = []
    if bool(section["emit_jsa"]):
        dense_thetas.append(("jsa_theta0", 0.0))
    for idx, value in enumerate(section["emit_singles_thetas"]):
        dense_thetas.append((f"singles_theta{idx}", float(value)))
    for name, value in dense_thetas:
        js = jsa_multiline(profile, spec.with_theta(value), length_m=length,
                           gamma_w_m=gamma, nodes_per_band=nodes,
                           grid_points=int(section["jsa_grid_points"]))
        if name.startswith("jsa"):
            emitter.csv(f"{name}.csv", joint_spectrum_table(js))
        else:
            omega, inten = marginal_intensity(js)
            header = ("omega_rad_s", "lambda_um", "intensity_norm")
            emitter.csv(f"{name}.csv",
                        (header, ((om, float(lambda_um_from_omega(om)), v)
                                  for om, v in zip(omega, inten))))


_COMMANDS = {
    "dispersion": cmd_dispersion,
    "contour": cmd_contour,
    "singles": cmd_singles,
    "jsa": cmd_jsa,
    "design-sweep": cmd_design_sweep,
    "ndp": cmd_ndp,
    "interference": cmd_interference,
}


# --------------------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sfwm",
        description="Broadband photon-pair source design via spontaneous "
                    "four-wave mixing in dispersion-engineered fiber")
    parser.add_argument("--version", action="version",
                        version=f"sfwm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="JSON config path "
                                          "(defaults apply when omitted)")
        cmd.add_argument("--out", help="output directory "
                                       "(overrides output_dir)")
        cmd.add_argument("--threads", type=int,
                         help="parallelism degree (overrides config)")
        cmd.add_argument("--seed", type=int,
                         help="reserved; all computations are deterministic")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.config is not None:
            config = RunConfig.from_file(args.config)
            with open(args.config, "r", encoding="utf-8") as handle:
                config_text = handle.read()
        else:
            config = RunConfig()
            config_text = config.to_json()
        if args.out is not None:
            config.data["output_dir"] = args.out
        if args.threads is not None:
            config.data["threads"] = int(args.threads)
        if args.seed is not None:
            config.data["seed"] = int(args.seed)

        out_dir = config["output_dir"]
        os.makedirs(out_dir, exist_ok=True)
        emitter = _Emitter(out_dir)
        _COMMANDS[args.command](config, emitter)
        write_manifest(out_dir, emitter.names, config_text)
        return 0
    except SfwmError as exc:
        print(f"sfwm {args.command}: error: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
