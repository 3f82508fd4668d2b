"""Design machinery for flat, ultra-broadband pair emission.

A fiber produces a flat emission spectrum around the degenerate point when
four conditions hold there: the process is perfectly phasematched, the pump
frequencies conserve energy with the emission pair, the phasematching
contour runs parallel to the difference-frequency axis, and the contour's
curvature vanishes.  The curvature is controlled by the fourth derivative
of the propagation constant at the zero-dispersion frequency, so the design
knob is the core radius that nulls that derivative for a given air-filling
fraction.

This module evaluates the four conditions for candidate operating points,
searches for the fourth-derivative-zero radius, solves for nondegenerate
pump pairs that reproduce the degenerate-pump mismatch (both isolated pairs
and the continuum of near-equivalent pairs), verifies the algebraic
identity relating the two pumping schemes, and sweeps emission bandwidth
across a radius grid.

Units follow the package convention: angular frequencies in rad/s,
wavevectors in 1/m, lengths in m, geometry in um at the API boundary.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dispersion import DispersionProfile, build_profile_um
from .errors import (ConfigError, DomainError, NumericError, ResolutionError,
                     SingularCurvatureError, TruncatedSpectrumError)
from .phasematch import PumpPair, delta_k_cw, delta_k_singles
from .sellmeier import FUSED_SILICA, SellmeierModel, lambda_um_from_omega
from .twophoton import (DEFAULT_GAMMA_W_M, DEFAULT_LENGTH_M, DEFAULT_POWER_W,
                        DEFAULT_SINGLES_POINTS, EDGE_INTENSITY_WARNING,
                        bandwidth_report, singles_spectrum)

__all__ = [
    "CURVATURE_PASS_FRACTION",
    "CURVATURE_REFERENCE_S",
    "CONTINUUM_TOL_1_M",
    "ContinuumInterval",
    "DesignConditionsReport",
    "DISCRETE_ROOT_FLOOR_1_M",
    "K4_RADIUS_TOL_UM",
    "NDP_SCAN_POINTS",
    "NdpPair",
    "PumpSolutionSet",
    "SLOPE_PASS_LIMIT",
    "SweepRow",
    "bandwidth_sweep",
    "design_zero_dispersion_frequency",
    "dp_ndp_symmetry_residual",
    "evaluate_conditions",
    "find_k4_zero_radius",
    "find_ndp_pairs",
]

# Bisection stops when the radius bracket is narrower than this.
K4_RADIUS_TOL_UM = 1.0e-4
# Scan resolution for nondegenerate pump-pair root finding.
NDP_SCAN_POINTS = 2000
# A pump detuning belongs to the continuum while the degenerate-pump
# mismatch constant stays below this numerical-zero floor.
CONTINUUM_TOL_1_M = 1.0e-4
# Sign changes whose bracketing residuals both sit below this floor are
# rounding noise inside the continuum, not isolated roots.
DISCRETE_ROOT_FLOOR_1_M = 1.0e-3
# Half-difference probe offset used to measure the contour slope, as a
# fraction of the candidate's center frequency.
SLOPE_PROBE_FRACTION = 1.0e-3
SLOPE_BISECTION_ITERATIONS = 80
# Condition iii passes when |d(half-sum)/d(half-difference)| is below this.
SLOPE_PASS_LIMIT = 1.0e-3
# Contour curvature of the visibly-curved reference geometry (core radius
# 0.9023 um, air fill 0.5): |k''''/(12 k''')| at its zero-dispersion
# frequency.  Condition iv passes below a small fraction of this value.
CURVATURE_REFERENCE_S = 4.421590e-17
CURVATURE_PASS_FRACTION = 0.05
# Phasematch-residual pass tolerance: a tenth of the sinc main-lobe
# half-width for the default interaction length.
DEFAULT_PHASEMATCH_TOL_1_M = 2.0 * math.pi / (10.0 * DEFAULT_LENGTH_M)
ENERGY_TOL_REL = 1.0e-12
PAIR_SYMMETRY_REL_TOL = 1.0e-12


def design_zero_dispersion_frequency(profile: DispersionProfile) -> float:
    """Highest zero-dispersion frequency of ``profile``.

    Geometries with two zero-dispersion points emit their broadband spectrum
    around the higher-frequency one, so design operations anchor there.
    """
    roots = profile.zero_dispersion_frequencies()
    if roots.size == 0:
        raise DomainError(
            "design: the dispersion profile has no zero-dispersion frequency "
            "inside the validity window")
    return float(roots[-1])


# --------------------------------------------------------------------------------------
# fourth-derivative-zero radius
# --------------------------------------------------------------------------------------

def find_k4_zero_radius(air_fill_fraction: float,
                        r_bracket_um: tuple[float, float],
                        tol_um: float = K4_RADIUS_TOL_UM,
                        model: SellmeierModel = FUSED_SILICA) -> float:
    """Core radius where the fourth derivative of k vanishes at the fiber's own
    zero-dispersion frequency.

    ``r_bracket_um`` must bracket a sign change of that derivative.  The
    search bisects to ``tol_um``.  Radii probed along the way that have no
    zero-dispersion frequency raise a :class:`DomainError` naming the radius.
    """
    lo, hi = (float(r_bracket_um[0]), float(r_bracket_um[1]))
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigError("k4 radius search: bracket must be finite")
    if lo > hi:
        lo, hi = hi, lo
    if lo <= 0.0 or lo == hi:
        raise ConfigError(
            f"k4 radius search: bracket ({lo}, {hi}) um must be positive with "
            "distinct endpoints")
    if tol_um <= 0.0:
        raise ConfigError("k4 radius search: tol_um must be positive")

    def k4_at_own_zdw(r_um: float) -> float:
        profile = build_profile_um(r_um, air_fill_fraction, model=model)
        roots = profile.zero_dispersion_frequencies()
        if roots.size == 0:
            raise DomainError(
                f"k4 radius search: no zero-dispersion frequency at core "
                f"radius {r_um:.6f} um (air fill {air_fill_fraction})")
        return float(profile.k_derivative(float(roots[-1]), 4))

    f_lo = k4_at_own_zdw(lo)
    f_hi = k4_at_own_zdw(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise ConfigError(
            f"k4 radius search: no sign change over bracket ({lo}, {hi}) um "
            f"(derivative {f_lo:.3e} and {f_hi:.3e} s^4/m)")
    while hi - lo > tol_um:
        mid = 0.5 * (lo + hi)
        f_mid = k4_at_own_zdw(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --------------------------------------------------------------------------------------
# nondegenerate pump solutions
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class NdpPair:
    """One isolated nondegenerate pump pair, symmetric about the
    zero-dispersion frequency."""

    omega_high_rad_s: float
    omega_low_rad_s: float
    residual_1_m: float

    def __post_init__(self) -> None:
        if not (self.omega_low_rad_s > 0.0
                and self.omega_high_rad_s > self.omega_low_rad_s):
            raise ConfigError(
                "NdpPair: frequencies must be positive with high > low")

    @property
    def detuning_rad_s(self) -> float:
        """Half-separation of the pair (distance of each line from center)."""
        return 0.5 * (self.omega_high_rad_s - self.omega_low_rad_s)

    @property
    def lambda_short_um(self) -> float:
        return lambda_um_from_omega(self.omega_high_rad_s)

    @property
    def lambda_long_um(self) -> float:
        return lambda_um_from_omega(self.omega_low_rad_s)

    def to_dict(self) -> dict:
        return {
            "omega_high_rad_s": self.omega_high_rad_s,
            "omega_low_rad_s": self.omega_low_rad_s,
            "lambda_short_um": self.lambda_short_um,
            "lambda_long_um": self.lambda_long_um,
            "detuning_rad_s": self.detuning_rad_s,
            "residual_1_m": self.residual_1_m,
        }


@dataclass(frozen=True)
class ContinuumInterval:
    """Frequency interval over which every symmetric pump pair is equivalent
    to the degenerate pump within the configured mismatch floor."""

    omega_low_rad_s: float
    omega_high_rad_s: float
    tolerance_1_m: float
    truncated: bool = False

    def __post_init__(self) -> None:
        if not (0.0 < self.omega_low_rad_s < self.omega_high_rad_s):
            raise ConfigError(
                "ContinuumInterval: frequencies must be positive with "
                "low < high")

    @property
    def lambda_short_um(self) -> float:
        return lambda_um_from_omega(self.omega_high_rad_s)

    @property
    def lambda_long_um(self) -> float:
        return lambda_um_from_omega(self.omega_low_rad_s)

    def to_dict(self) -> dict:
        return {
            "omega_low_rad_s": self.omega_low_rad_s,
            "omega_high_rad_s": self.omega_high_rad_s,
            "lambda_short_um": self.lambda_short_um,
            "lambda_long_um": self.lambda_long_um,
            "tolerance_1_m": self.tolerance_1_m,
            "truncated": self.truncated,
        }


@dataclass(frozen=True)
class PumpSolutionSet:
    """All pump choices that phasematch the degenerate emission point."""

    dp_omega_rad_s: float
    discrete_pairs: tuple[NdpPair, ...]
    continuum: ContinuumInterval | None
    power_term_1_m: float
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        center = 2.0 * self.dp_omega_rad_s
        for pair in self.discrete_pairs:
            total = pair.omega_high_rad_s + pair.omega_low_rad_s
            if abs(total - center) > PAIR_SYMMETRY_REL_TOL * center:
                raise NumericError(
                    "PumpSolutionSet: pair frequencies do not sum to twice "
                    f"the degenerate frequency (relative error "
                    f"{abs(total - center) / center:.3e})")

    def to_dict(self) -> dict:
        return {
            "dp_omega_rad_s": self.dp_omega_rad_s,
            "dp_lambda_um": lambda_um_from_omega(self.dp_omega_rad_s),
            "discrete_pairs": [pair.to_dict() for pair in self.discrete_pairs],
            "continuum": None if self.continuum is None else self.continuum.to_dict(),
            "power_term_1_m": self.power_term_1_m,
            "flags": list(self.flags),
        }


def _dk0_of_detuning(profile: DispersionProfile, omega_zd: float, detuning):
    """Degenerate-pump equivalence constant k(c+d) + k(c-d) - 2k(c)."""
    d = np.asarray(detuning, dtype=float)
    return (profile.k(omega_zd + d) + profile.k(omega_zd - d)
            - 2.0 * profile.k(omega_zd))


def find_ndp_pairs(profile: DispersionProfile,
                   power1_w: float = 0.0,
                   power2_w: float = 0.0,
                   gamma1_w_m: float = 0.0,
                   gamma2_w_m: float = 0.0,
                   omega_window_rad_s: tuple[float, float] | None = None,
                   scan_points: int = NDP_SCAN_POINTS,
                   continuum_tol_1_m: float = CONTINUUM_TOL_1_M,
                   root_floor_1_m: float = DISCRETE_ROOT_FLOOR_1_M,
                   ) -> PumpSolutionSet:
    """Pump pairs symmetric about the zero-dispersion frequency that
    phasematch degenerate emission there.

    A symmetric pair ``(c - d, c + d)`` about the zero-dispersion frequency
    ``c`` reproduces the degenerate pump's mismatch up to the constant
    ``k(c+d) + k(c-d) - 2 k(c)``.  Isolated pairs are the roots of that
    constant minus the nonlinear power term, found by scanning the detuning
    and bisecting each sign change.  The continuum is the contiguous
    detuning interval around zero where the constant itself (at zero power)
    stays below ``continuum_tol_1_m`` — there the contour is effectively
    vertical and every pair inside is equivalent within numerical precision.

    ``omega_window_rad_s`` restricts the scan for isolated pairs to pump
    frequencies inside the window (the partner is always the mirror image).
    Windows reaching outside the validity region are clipped with a
    ``window-clipped`` flag.  The continuum is always measured over the full
    validity region.
    """
    if scan_points < 16:
        raise ConfigError("find_ndp_pairs: scan_points must be at least 16")
    if continuum_tol_1_m <= 0.0:
        raise ConfigError("find_ndp_pairs: continuum_tol_1_m must be positive")
    omega_zd = design_zero_dispersion_frequency(profile)
    power_term = (gamma1_w_m * power1_w + gamma2_w_m * power2_w)
    flags: list[str] = []

    detuning_max = min(profile.omega_max - omega_zd, omega_zd - profile.omega_min)
    if detuning_max <= 0.0:
        raise DomainError(
            "find_ndp_pairs: the zero-dispersion frequency sits on the edge "
            "of the validity window")

    # Detuning intervals reachable by the requested pump-frequency window.
    if omega_window_rad_s is None:
        scan_intervals = [(0.0, detuning_max)]
    else:
        w_lo, w_hi = (float(omega_window_rad_s[0]), float(omega_window_rad_s[1]))
        if not (w_lo < w_hi):
            raise ConfigError(
                "find_ndp_pairs: omega_window_rad_s must satisfy low < high")
        c_lo, c_hi = max(w_lo, profile.omega_min), min(w_hi, profile.omega_max)
        if (c_lo, c_hi) != (w_lo, w_hi):
            flags.append("window-clipped")
        if c_lo >= c_hi:
            raise DomainError(
                "find_ndp_pairs: omega_window_rad_s lies outside the validity "
                "window")
        intervals = []
        # Window below center: detunings c - omega1.
        if c_lo < omega_zd:
            intervals.append((max(omega_zd - c_hi, 0.0), omega_zd - c_lo))
        # Window above center: detunings omega1 - c.
        if c_hi > omega_zd:
            intervals.append((max(c_lo - omega_zd, 0.0), c_hi - omega_zd))
        scan_intervals = []
        for d_lo, d_hi in intervals:
            d_hi = min(d_hi, detuning_max)
            if d_hi < detuning_max and "window-clipped" not in flags:
                pass  # partner-side clipping is inherent, not a user warning
            if d_lo < d_hi:
                scan_intervals.append((d_lo, d_hi))
        if not scan_intervals:
            raise DomainError(
                "find_ndp_pairs: no admissible pump detunings inside the "
                "window")

    # -- continuum: zero-power equivalence constant below the floor ------------------
    d_grid = np.linspace(0.0, detuning_max, scan_points)
    dk0_grid = _dk0_of_detuning(profile, omega_zd, d_grid)
    above = np.abs(dk0_grid) > continuum_tol_1_m
    if not above.any():
        continuum = ContinuumInterval(omega_zd - detuning_max,
                                      omega_zd + detuning_max,
                                      continuum_tol_1_m, truncated=True)
        flags.append("continuum-truncated")
    else:
        first = int(np.argmax(above))
        lo_d = float(d_grid[max(first - 1, 0)])
        hi_d = float(d_grid[first])
        for _ in range(SLOPE_BISECTION_ITERATIONS):
            mid = 0.5 * (lo_d + hi_d)
            if abs(float(_dk0_of_detuning(profile, omega_zd, mid))) > continuum_tol_1_m:
                hi_d = mid
            else:
                lo_d = mid
        edge = 0.5 * (lo_d + hi_d)
        continuum = ContinuumInterval(omega_zd - edge, omega_zd + edge,
                                      continuum_tol_1_m)

    # -- isolated pairs: sign changes of the full residual ---------------------------
    def residual(detuning):
        return _dk0_of_detuning(profile, omega_zd, detuning) - power_term

    pairs: list[NdpPair] = []
    seen: set[int] = set()
    for d_lo, d_hi in scan_intervals:
        grid = np.linspace(d_lo, d_hi, scan_points)
        res = residual(grid)
        crossing = np.nonzero(np.sign(res[:-1]) * np.sign(res[1:]) < 0)[0]
        for idx in crossing:
            # Inside the continuum the residual is rounding noise; a genuine
            # root must swing through a resolvable magnitude.
            if max(abs(res[idx]), abs(res[idx + 1])) < root_floor_1_m:
                continue
            a, b = float(grid[idx]), float(grid[idx + 1])
            f_a = float(residual(a))
            for _ in range(SLOPE_BISECTION_ITERATIONS):
                mid = 0.5 * (a + b)
                f_mid = float(residual(mid))
                if (f_mid > 0.0) == (f_a > 0.0):
                    a, f_a = mid, f_mid
                else:
                    b = mid
            root = 0.5 * (a + b)
            if root <= 0.0:
                continue
            key = int(round(root / max(1e-6 * omega_zd, 1.0)))
            if key in seen:
                continue
            seen.add(key)
            pairs.append(NdpPair(omega_high_rad_s=omega_zd + root,
                                 omega_low_rad_s=omega_zd - root,
                                 residual_1_m=abs(float(residual(root)))))
    pairs.sort(key=lambda p: p.detuning_rad_s)

    return PumpSolutionSet(dp_omega_rad_s=omega_zd,
                           discrete_pairs=tuple(pairs),
                           continuum=continuum,
                           power_term_1_m=power_term,
                           flags=tuple(flags))


# --------------------------------------------------------------------------------------
# condition evaluation
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class DesignConditionsReport:
    """Residuals and pass flags of the four flat-emission conditions.

    Condition i: phasematch residual |Delta k| at the candidate (1/m).
    Condition ii: energy-conservation residual |omega_s + omega_i -
    omega_1 - omega_2| (rad/s).  Condition iii: contour slope
    d(half-sum)/d(half-difference) at the candidate (dimensionless; NaN when
    no contour passes nearby).  Condition iv: contour curvature
    |k''''/(12 k''')| at the candidate's center frequency (s).
    """

    phasematch_residual_1_m: float
    phasematch_tol_1_m: float
    phasematch_pass: bool
    energy_residual_rad_s: float
    energy_tol_rad_s: float
    energy_pass: bool
    contour_slope: float
    slope_limit: float
    slope_pass: bool
    curvature_s: float
    curvature_threshold_s: float
    curvature_pass: bool
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        checks = (
            (self.phasematch_pass,
             self.phasematch_residual_1_m <= self.phasematch_tol_1_m),
            (self.energy_pass,
             self.energy_residual_rad_s <= self.energy_tol_rad_s),
            (self.slope_pass,
             math.isfinite(self.contour_slope)
             and abs(self.contour_slope) <= self.slope_limit),
            (self.curvature_pass,
             self.curvature_s <= self.curvature_threshold_s),
        )
        for recorded, derived in checks:
            if recorded != derived:
                raise NumericError(
                    "DesignConditionsReport: pass flags must be derived from "
                    "the residuals and tolerances")

    @property
    def all_pass(self) -> bool:
        return (self.phasematch_pass and self.energy_pass
                and self.slope_pass and self.curvature_pass)

    def to_dict(self) -> dict:
        def clean(x: float):
            return x if math.isfinite(x) else None

        return {
            "phasematch_residual_1_m": clean(self.phasematch_residual_1_m),
            "phasematch_tol_1_m": self.phasematch_tol_1_m,
            "phasematch_pass": self.phasematch_pass,
            "energy_residual_rad_s": clean(self.energy_residual_rad_s),
            "energy_tol_rad_s": self.energy_tol_rad_s,
            "energy_pass": self.energy_pass,
            "contour_slope": clean(self.contour_slope),
            "slope_limit": self.slope_limit,
            "slope_pass": self.slope_pass,
            "curvature_s": clean(self.curvature_s),
            "curvature_threshold_s": self.curvature_threshold_s,
            "curvature_pass": self.curvature_pass,
            "all_pass": self.all_pass,
            "flags": list(self.flags),
        }


def _solve_half_sum_offset(profile: DispersionProfile, pump: PumpPair,
                           center: float, half_diff: float,
                           bracket: float) -> float | None:
    """Half-sum offset where the mismatch contour crosses the given
    half-difference line, or None when no crossing brackets."""

    def mismatch(offset: float) -> float:
        om_s = np.array([center + offset + half_diff])
        om_i = np.array([center + offset - half_diff])
        return float(delta_k_cw(profile, pump, om_s, om_i)[0])

    for half_width in (0.5 * bracket, 0.9 * bracket):
        lo, hi = -half_width, half_width
        try:
            f_lo, f_hi = mismatch(lo), mismatch(hi)
        except DomainError:
            return None
        if f_lo == 0.0:
            return lo
        if f_hi == 0.0:
            return hi
        if (f_lo > 0.0) == (f_hi > 0.0):
            continue
        for _ in range(SLOPE_BISECTION_ITERATIONS):
            mid = 0.5 * (lo + hi)
            f_mid = mismatch(mid)
            if f_mid == 0.0:
                return mid
            if (f_mid > 0.0) == (f_lo > 0.0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        return 0.5 * (lo + hi)
    return None


def evaluate_conditions(profile: DispersionProfile,
                        omega_signal_rad_s: float,
                        omega_idler_rad_s: float,
                        pump: PumpPair,
                        phasematch_tol_1_m: float = DEFAULT_PHASEMATCH_TOL_1_M,
                        energy_tol_rel: float = ENERGY_TOL_REL,
                        slope_limit: float = SLOPE_PASS_LIMIT,
                        curvature_threshold_s: float | None = None,
                        slope_probe_fraction: float = SLOPE_PROBE_FRACTION,
                        ) -> DesignConditionsReport:
    """Evaluate the four flat-emission conditions at a candidate pair.

    The slope (condition iii) is measured by solving for the contour's
    half-sum offset at two half-difference probes straddling the candidate
    and differencing; for an exchange-symmetric candidate the two solves
    mirror each other exactly and the slope is identically zero.  When no
    contour crosses either probe bracket, the slope is NaN, condition iii
    fails, and a ``contour-absent`` flag is set — by construction that
    situation also shows up as a large condition-i residual rather than an
    exception.  The curvature (condition iv) is evaluated from the
    dispersion derivatives at the candidate's center frequency.
    """
    om_s = float(omega_signal_rad_s)
    om_i = float(omega_idler_rad_s)
    flags: list[str] = []
    if curvature_threshold_s is None:
        curvature_threshold_s = CURVATURE_PASS_FRACTION * CURVATURE_REFERENCE_S

    residual_i = abs(float(delta_k_cw(profile, pump,
                                      np.array([om_s]), np.array([om_i]))[0]))
    energy_residual = abs((om_s + om_i) - pump.omega_sum)
    energy_tol = energy_tol_rel * pump.omega_sum

    center = 0.5 * (om_s + om_i)
    half_diff0 = 0.5 * (om_s - om_i)
    probe = slope_probe_fraction * center
    plus = _solve_half_sum_offset(profile, pump, center, half_diff0 + probe,
                                  probe)
    minus = _solve_half_sum_offset(profile, pump, center, half_diff0 - probe,
                                   probe)
    if plus is None or minus is None:
        slope = math.nan
        flags.append("contour-absent")
    else:
        slope = (plus - minus) / (2.0 * probe)

    k3 = float(profile.k_derivative(center, 3))
    k4 = float(profile.k_derivative(center, 4))
    if k3 == 0.0:
        raise SingularCurvatureError(
            "evaluate_conditions: third dispersion derivative vanishes at the "
            "candidate center; contour curvature is undefined")
    curvature = abs(k4 / (12.0 * k3))

    return DesignConditionsReport(
        phasematch_residual_1_m=residual_i,
        phasematch_tol_1_m=phasematch_tol_1_m,
        phasematch_pass=residual_i <= phasematch_tol_1_m,
        energy_residual_rad_s=energy_residual,
        energy_tol_rad_s=energy_tol,
        energy_pass=energy_residual <= energy_tol,
        contour_slope=slope,
        slope_limit=slope_limit,
        slope_pass=math.isfinite(slope) and abs(slope) <= slope_limit,
        curvature_s=curvature,
        curvature_threshold_s=curvature_threshold_s,
        curvature_pass=curvature <= curvature_threshold_s,
        flags=tuple(flags),
    )


# --------------------------------------------------------------------------------------
# degenerate / nondegenerate equivalence
# --------------------------------------------------------------------------------------

def dp_ndp_symmetry_residual(profile: DispersionProfile,
                             omega_rad_s,
                             omega_high_rad_s: float,
                             omega_low_rad_s: float,
                             power_term_1_m: float = 0.0) -> float:
    """Max deviation of the nondegenerate-vs-degenerate mismatch difference
    from its analytic constant, over the given emission grid.

    For a pump pair symmetric about the zero-dispersion frequency, the
    emission-frequency mismatch differs from the degenerate pump's by the
    constant ``k(high) + k(low) - 2 k(center)`` (power terms matched).  The
    returned residual is the grid maximum of the difference minus that
    constant; it should sit at rounding scale (about 1e-9 of k) for any
    symmetric pair.
    """
    omega_zd = design_zero_dispersion_frequency(profile)
    total = omega_high_rad_s + omega_low_rad_s
    center = 2.0 * omega_zd
    if abs(total - center) > PAIR_SYMMETRY_REL_TOL * center:
        raise ConfigError(
            "dp_ndp_symmetry_residual: pump pair is not symmetric about the "
            f"zero-dispersion frequency (relative imbalance "
            f"{abs(total - center) / center:.3e})")
    # Encode the matched power term as power x gamma = power_term x 1.
    ndp = PumpPair(omega_high_rad_s, omega_low_rad_s,
                   power1_w=power_term_1_m, gamma1_w_m=1.0)
    dp = PumpPair(omega_zd, omega_zd,
                  power1_w=power_term_1_m, gamma1_w_m=1.0)
    omega = np.asarray(omega_rad_s, dtype=float)
    dk_ndp = delta_k_singles(profile, ndp, omega)
    dk_dp = delta_k_singles(profile, dp, omega)
    dk0 = float(profile.k(omega_high_rad_s) + profile.k(omega_low_rad_s)
                - 2.0 * profile.k(omega_zd))
    diff = (dk_ndp - dk_dp) - dk0
    finite = np.isfinite(diff)
    if not finite.any():
        raise DomainError(
            "dp_ndp_symmetry_residual: no grid point has both emission "
            "frequencies inside the validity window")
    return float(np.max(np.abs(diff[finite])))


# --------------------------------------------------------------------------------------
# bandwidth sweep
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    """One radius of a bandwidth sweep.

    ``fwhm_main_nm`` is the outer-slope width of the flat emission region
    (the central mode merged with any satellites connected above the
    flat-region valley level); ``bw_inner_sat_nm`` and ``bw_outer_sat_nm``
    are the outer-slope widths across the innermost and outermost satellite
    pairs.  Fields are None when the quantity does not exist at that radius
    (no zero-dispersion frequency, truncated main mode, no satellites);
    ``flags`` says why.
    """

    r_um: float
    f: float
    lambda_zd_um: float | None
    fwhm_main_nm: float | None
    bw_inner_sat_nm: float | None
    bw_outer_sat_nm: float | None
    flags: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "r_um": self.r_um,
            "f": self.f,
            "lambda_zd_um": self.lambda_zd_um,
            "fwhm_main_nm": self.fwhm_main_nm,
            "bw_inner_sat_nm": self.bw_inner_sat_nm,
            "bw_outer_sat_nm": self.bw_outer_sat_nm,
            "flags": list(self.flags),
        }


def _sweep_row(r_um: float, air_fill_fraction: float, power_w: float,
               gamma_w_m: float, length_m: float, npoints: int,
               model: SellmeierModel) -> SweepRow:
    base = dict(r_um=float(r_um), f=float(air_fill_fraction),
                lambda_zd_um=None, fwhm_main_nm=None,
                bw_inner_sat_nm=None, bw_outer_sat_nm=None)
    try:
        profile = build_profile_um(r_um, air_fill_fraction, model=model)
    except (DomainError, NumericError):
        return SweepRow(**base, flags=("profile-failed",))
    roots = profile.zero_dispersion_frequencies()
    if roots.size == 0:
        return SweepRow(**base, flags=("no-zdw",))
    omega_zd = float(roots[-1])
    base["lambda_zd_um"] = lambda_um_from_omega(omega_zd)
    pump = PumpPair(omega_zd, omega_zd, power_w, power_w, gamma_w_m, gamma_w_m)
    try:
        spectrum = singles_spectrum(profile, pump, length_m=length_m,
                                    npoints=npoints)
    except (DomainError, NumericError):
        return SweepRow(**base, flags=("spectrum-failed",))
    flags: list[str] = []
    if spectrum.edge_fraction > EDGE_INTENSITY_WARNING:
        flags.append("validity-edge")
    try:
        report = bandwidth_report(spectrum, omega_zd_rad_s=omega_zd)
    except TruncatedSpectrumError:
        return SweepRow(**base, flags=tuple(flags + ["main-truncated"]))
    except ResolutionError:
        return SweepRow(**base, flags=tuple(flags + ["main-unresolved"]))
    flags.extend(report.flags)
    base["fwhm_main_nm"] = report.flat_fwhm_nm
    if report.satellite_pairs:
        base["bw_inner_sat_nm"] = report.satellite_pairs[0].outer_width_nm
        base["bw_outer_sat_nm"] = report.satellite_pairs[-1].outer_width_nm
    return SweepRow(**base, flags=tuple(flags))


def bandwidth_sweep(air_fill_fraction: float,
                    radii_um,
                    power_w: float = DEFAULT_POWER_W,
                    gamma_w_m: float = DEFAULT_GAMMA_W_M,
                    length_m: float = DEFAULT_LENGTH_M,
                    npoints: int = DEFAULT_SINGLES_POINTS,
                    threads: int = 1,
                    model: SellmeierModel = FUSED_SILICA,
                    ) -> tuple[SweepRow, ...]:
    """Emission bandwidth versus core radius at fixed air-filling fraction.

    Each radius is processed independently (optionally across ``threads``
    worker threads; each pump line carries ``power_w``) and rows are
    returned in input order, so the output is deterministic for a fixed
    grid regardless of thread count.  Radii where the spectrum or its main
    mode cannot be measured yield flagged rows rather than errors.
    """
    radii = [float(r) for r in np.atleast_1d(np.asarray(radii_um, dtype=float))]
    if not radii:
        raise ConfigError("bandwidth_sweep: radii_um must be non-empty")
    if threads < 1:
        raise ConfigError("bandwidth_sweep: threads must be >= 1")

    def worker(r_um: float) -> SweepRow:
        return _sweep_row(r_um, air_fill_fraction, power_w, gamma_w_m,
                          length_m, npoints, model)

    if threads == 1:
        rows = [worker(r) for r in radii]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(worker, radii))
    return tuple(rows)
