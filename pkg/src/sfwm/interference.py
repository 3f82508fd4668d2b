"""Pump-phase interference between degenerate and non-degenerate pair pathways.

A three-line pump (two outer lines at a phase-matched non-degenerate pair of
pump frequencies, one centre line at the degenerate pump frequency) drives two
indistinguishable pair-generation pathways onto the *same* broadband emission
mode: the centre line alone (two pump photons from the degenerate line) and
the outer lines jointly (one pump photon from each).  Scanning the phase
``theta`` of the centre line against the outer pair modulates the joint
amplitude as ``cos(theta)`` and the pair flux as ``cos^2(theta)`` — a
nonlinear two-photon interference with period ``pi``.

The joint amplitude is evaluated from the pump self-convolution restricted to
the spectral region of the main emission mode: grid cells whose pump-sum
frequency ``omega_s + omega_i`` lies within a narrow window around twice the
degenerate pump frequency.  All nine band-pair combinations of the three pump
lines are evaluated on those cells.  Combinations whose sum-frequency support
misses the window (one photon from the centre line and one from an outer
line, or both photons from the same outer line) contribute exactly zero
there; they are excluded by the restriction itself, not dropped from the
integrand.  This restriction is load-bearing: near the zero-dispersion
frequency the group velocity is nearly flat, so the off-sum combinations are
near-phasematched along long stripes of their own and would otherwise bury
the interference contrast.  Widening ``sum_half_window_rad_s`` admits them
honestly.  A diagnostic reports the in-window contribution of the same-band
combinations, which grows only when the bands approach each other.

Amplitudes are raw (pump-convolution units); only flux *ratios* are
meaningful.  Absolute emission rates are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from ._kernels import phase_matched_amplitude
from .dispersion import DispersionProfile
from .errors import (ConfigError, DomainError, NumericError, PumpSpecError,
                     ResolutionError)
from .phasematch import PumpPair
from .twophoton import (DEFAULT_GAMMA_W_M, DEFAULT_LENGTH_M, DEFAULT_POWER_W,
                        MIN_QUADRATURE_NODES, JointSpectrum, RectBand,
                        RectBandsEnvelope, _uniform_spacing, bandwidth_report,
                        singles_spectrum)

__all__ = [
    "SUM_RULE_REL_TOL",
    "SUM_WINDOW_WIDTH_FACTOR",
    "DEFAULT_JSA_POINTS",
    "DEFAULT_FLUX_POINTS",
    "DEFAULT_THETA_POINTS",
    "GRID_SPAN_FWHM_FACTOR",
    "MultiLinePumpSpec",
    "PhaseSweep",
    "interference_grid",
    "jsa_multiline",
    "flux_vs_phase",
    "marginal_intensity",
]

# Relative tolerance on the energy sum rule 2*omega_dp = omega_ndp1 + omega_ndp2.
SUM_RULE_REL_TOL = 1.0e-9

# Default half-width of the pump-sum window, in units of the band width.  The
# sum-frequency support of the matched combinations is exactly +- one band
# width around twice the degenerate pump frequency; the default adds margin.
SUM_WINDOW_WIDTH_FACTOR = 2.0

# Default per-axis grid sizes.  The dense joint amplitude costs
# O(points^2) memory; the flux sweep streams anti-diagonals and can afford a
# finer grid.
DEFAULT_JSA_POINTS = 2049
DEFAULT_FLUX_POINTS = 4097

# Default phase grid for the flux sweep (covers [0, pi] inclusively).
DEFAULT_THETA_POINTS = 33

# Emission-axis half-span of the default grid, in units of the main-mode
# full width at half maximum.
GRID_SPAN_FWHM_FACTOR = 1.5

# Grid points used for the bandwidth probe inside the grid builder.
_GRID_PROBE_POINTS = 20001

_SQRT2 = math.sqrt(2.0)


# --------------------------------------------------------------------------------------
# pump specification
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class MultiLinePumpSpec:
    """Three rectangular pump lines with a 1 : sqrt(2) e^{i theta} : 1 ratio.

    The outer lines sit at a non-degenerate phase-matched pump pair
    (``omega_ndp1 < omega_dp < omega_ndp2``, energy sum rule
    ``omega_ndp1 + omega_ndp2 = 2 omega_dp``); the centre line sits at the
    degenerate pump frequency and carries the scanned phase ``theta_rad``.
    All three bands share a common width and the total peak power is split so
    that each pathway (centre line alone / outer lines jointly) carries half:
    the base amplitude is ``alpha0 = sqrt(P_total / (4 * band_width))`` and
    the centre line has amplitude ``sqrt(2) * alpha0 * e^{i theta}``, making
    ``integral |alpha|^2 d omega = P_total`` independent of ``theta``.
    """

    omega_ndp1_rad_s: float
    omega_dp_rad_s: float
    omega_ndp2_rad_s: float
    band_width_rad_s: float
    theta_rad: float = 0.0
    total_peak_power_w: float = DEFAULT_POWER_W

    def __post_init__(self) -> None:
        for name in ("omega_ndp1_rad_s", "omega_dp_rad_s", "omega_ndp2_rad_s",
                     "band_width_rad_s", "total_peak_power_w"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise PumpSpecError(f"multi-line pump: {name} must be a "
                                    f"positive finite number, got {value!r}")
        if not math.isfinite(self.theta_rad):
            raise PumpSpecError("multi-line pump: theta_rad must be finite")
        if not (self.omega_ndp1_rad_s < self.omega_dp_rad_s
                < self.omega_ndp2_rad_s):
            raise PumpSpecError(
                "multi-line pump: line centres must be ordered "
                "omega_ndp1 < omega_dp < omega_ndp2")
        sum_residual = abs(self.omega_ndp1_rad_s + self.omega_ndp2_rad_s
                           - 2.0 * self.omega_dp_rad_s)
        if sum_residual > SUM_RULE_REL_TOL * (2.0 * self.omega_dp_rad_s):
            raise PumpSpecError(
                "multi-line pump: energy sum rule violated — "
                f"omega_ndp1 + omega_ndp2 differs from 2*omega_dp by "
                f"{sum_residual:.3e} rad/s (relative tolerance "
                f"{SUM_RULE_REL_TOL:g})")
        half = 0.5 * self.band_width_rad_s
        if (self.omega_ndp1_rad_s + half >= self.omega_dp_rad_s - half
                or self.omega_dp_rad_s + half >= self.omega_ndp2_rad_s - half):
            raise PumpSpecError(
                "multi-line pump: bands overlap — the common band width "
                f"{self.band_width_rad_s:.6g} rad/s exceeds the line "
                "separation; narrow the bands or separate the lines")

    @classmethod
    def symmetric(cls, omega_dp_rad_s: float, detuning_rad_s: float,
                  band_width_rad_s: float, theta_rad: float = 0.0,
                  total_peak_power_w: float = DEFAULT_POWER_W,
                  ) -> "MultiLinePumpSpec":
        """Build from the centre frequency and the outer-line detuning."""
        return cls(omega_ndp1_rad_s=omega_dp_rad_s - detuning_rad_s,
                   omega_dp_rad_s=omega_dp_rad_s,
                   omega_ndp2_rad_s=omega_dp_rad_s + detuning_rad_s,
                   band_width_rad_s=band_width_rad_s,
                   theta_rad=theta_rad,
                   total_peak_power_w=total_peak_power_w)

    def with_theta(self, theta_rad: float) -> "MultiLinePumpSpec":
        return replace(self, theta_rad=float(theta_rad))

    @property
    def amplitude0(self) -> float:
        """Base amplitude ``sqrt(P_total / (4 * band_width))``."""
        return math.sqrt(self.total_peak_power_w
                         / (4.0 * self.band_width_rad_s))

    @property
    def detuning_rad_s(self) -> float:
        return 0.5 * (self.omega_ndp2_rad_s - self.omega_ndp1_rad_s)

    @property
    def band_intervals(self) -> tuple[tuple[float, float], ...]:
        half = 0.5 * self.band_width_rad_s
        return tuple((c - half, c + half) for c in
                     (self.omega_ndp1_rad_s, self.omega_dp_rad_s,
                      self.omega_ndp2_rad_s))

    def _bands(self, include_dp: bool, include_ndp: bool,
               ) -> tuple[RectBand, ...]:
        a0 = self.amplitude0
        out = []
        if include_ndp:
            out.append(RectBand(self.omega_ndp1_rad_s,
                                self.band_width_rad_s, a0))
        if include_dp:
            dp_amp = _SQRT2 * a0 * complex(math.cos(self.theta_rad),
                                           math.sin(self.theta_rad))
            out.append(RectBand(self.omega_dp_rad_s,
                                self.band_width_rad_s, dp_amp))
        if include_ndp:
            out.append(RectBand(self.omega_ndp2_rad_s,
                                self.band_width_rad_s, a0))
        return tuple(out)

    def envelope(self) -> RectBandsEnvelope:
        """The full three-line pump spectral amplitude."""
        return RectBandsEnvelope(self._bands(True, True))

    def envelope_dp_only(self) -> RectBandsEnvelope:
        """Centre line alone (carries ``e^{i theta}``; half the total power)."""
        return RectBandsEnvelope(self._bands(True, False))

    def envelope_ndp_only(self) -> RectBandsEnvelope:
        """Outer line pair alone (half the total power)."""
        return RectBandsEnvelope(self._bands(False, True))

    def to_dict(self) -> dict:
        return {
            "omega_ndp1_rad_s": self.omega_ndp1_rad_s,
            "omega_dp_rad_s": self.omega_dp_rad_s,
            "omega_ndp2_rad_s": self.omega_ndp2_rad_s,
            "band_width_rad_s": self.band_width_rad_s,
            "theta_rad": self.theta_rad,
            "total_peak_power_w": self.total_peak_power_w,
        }


# --------------------------------------------------------------------------------------
# grids
# --------------------------------------------------------------------------------------

def interference_grid(profile: DispersionProfile, spec: MultiLinePumpSpec,
                      length_m: float = DEFAULT_LENGTH_M,
                      gamma_w_m: float = DEFAULT_GAMMA_W_M,
                      points: int = DEFAULT_JSA_POINTS,
                      span_fwhm_factor: float = GRID_SPAN_FWHM_FACTOR,
                      ) -> tuple[np.ndarray, dict]:
    """Emission-frequency axis covering the main mode.

    The axis spans ``+- span_fwhm_factor`` times the main-mode full width at
    half maximum around the zero-dispersion frequency, computed for an
    equivalent degenerate pump at the spec's total power, clipped to the
    dispersion model validity window.  The same axis serves both photons.
    """
    if points < 9:
        raise ConfigError("interference grid: need at least nine points")
    pump = PumpPair.degenerate(spec.omega_dp_rad_s,
                               power_w=spec.total_peak_power_w,
                               gamma_w_m=gamma_w_m)
    probe = singles_spectrum(profile, pump, length_m=length_m,
                             npoints=_GRID_PROBE_POINTS)
    report = bandwidth_report(probe)
    center = report.omega_zd_rad_s
    half = span_fwhm_factor * report.main_fwhm_rad_s
    lo = center - half
    hi = center + half
    clipped = False
    if lo < profile.omega_min:
        lo, clipped = profile.omega_min, True
    if hi > profile.omega_max:
        hi, clipped = profile.omega_max, True
    if not lo < hi:
        raise DomainError("interference grid: empty emission window after "
                          "clipping to the model validity range")
    meta = {
        "center_rad_s": center,
        "main_fwhm_rad_s": report.main_fwhm_rad_s,
        "span_fwhm_factor": span_fwhm_factor,
        "points": int(points),
        "clipped": clipped,
    }
    return np.linspace(lo, hi, int(points)), meta


# --------------------------------------------------------------------------------------
# stripe-restricted pump self-convolution
# --------------------------------------------------------------------------------------

def _band_index(spec: MultiLinePumpSpec, omega: float) -> int:
    """0/1/2 for the ndp1/dp/ndp2 band containing ``omega``, else -1."""
    for idx, (lo, hi) in enumerate(spec.band_intervals):
        if lo <= omega <= hi:
            return idx
    return -1


@dataclass
class _StripeGeometry:
    """Shared anti-diagonal bookkeeping for one (signal, idler) grid pair."""

    om_s: np.ndarray
    om_i: np.ndarray
    step: float
    s_lattice: np.ndarray
    m_window: np.ndarray
    k_s: np.ndarray
    k_i: np.ndarray
    sum_half_window_rad_s: float
    flags: tuple[str, ...]


def _stripe_geometry(profile: DispersionProfile, spec: MultiLinePumpSpec,
                     omega_s_rad_s: np.ndarray, omega_i_rad_s: np.ndarray,
                     sum_half_window_rad_s: float | None,
                     nodes_per_band: int) -> _StripeGeometry:
    if nodes_per_band < MIN_QUADRATURE_NODES:
        raise ResolutionError(
            f"multi-line pump: need at least {MIN_QUADRATURE_NODES} "
            f"quadrature nodes per band, got {nodes_per_band}")
    om_s = np.asarray(omega_s_rad_s, dtype=float)
    om_i = np.asarray(omega_i_rad_s, dtype=float)
    ds = _uniform_spacing(om_s, "interference signal axis")
    di = _uniform_spacing(om_i, "interference idler axis")
    if abs(ds - di) > 1.0e-9 * max(ds, di):
        raise ConfigError("interference grids: the signal and idler axes "
                          "must share one spacing (the pump-sum lattice "
                          "collapses anti-diagonals onto a common grid)")
    step = 0.5 * (ds + di)

    for lo, hi in spec.band_intervals:
        if lo < profile.omega_min or hi > profile.omega_max:
            raise DomainError(
                "multi-line pump: a pump band "
                f"[{lo:.6g}, {hi:.6g}] rad/s extends outside the dispersion "
                f"model validity range [{profile.omega_min:.6g}, "
                f"{profile.omega_max:.6g}] rad/s")

    if sum_half_window_rad_s is None:
        sum_half_window_rad_s = SUM_WINDOW_WIDTH_FACTOR * spec.band_width_rad_s
    if not (math.isfinite(sum_half_window_rad_s)
            and sum_half_window_rad_s > 0.0):
        raise ConfigError("interference: the pump-sum half window must be a "
                          "positive finite frequency")

    flags: list[str] = []
    cells_across = 2.0 * spec.band_width_rad_s / step
    if cells_across < 1.0:
        raise ResolutionError(
            "interference grids: the grid spacing "
            f"{step:.6g} rad/s cannot resolve the pump-sum feature of width "
            f"{2.0 * spec.band_width_rad_s:.6g} rad/s; refine the grids")
    if cells_across < 2.0:
        flags.append("ridge-unresolved")

    s_lattice = (om_i[0] + om_s[0]) + step * np.arange(om_i.size + om_s.size
                                                       - 1, dtype=float)
    target = 2.0 * spec.omega_dp_rad_s
    m_window = np.nonzero(np.abs(s_lattice - target)
                          <= sum_half_window_rad_s)[0]
    if m_window.size == 0:
        raise DomainError(
            "interference grids: no anti-diagonal falls inside the pump-sum "
            "window around twice the degenerate pump frequency; the grids "
            "do not cover the main emission mode")

    return _StripeGeometry(om_s=om_s, om_i=om_i, step=step,
                           s_lattice=s_lattice, m_window=m_window,
                           k_s=profile.k(om_s), k_i=profile.k(om_i),
                           sum_half_window_rad_s=float(sum_half_window_rad_s),
                           flags=tuple(flags))


def _band_node_table(profile: DispersionProfile, spec: MultiLinePumpSpec,
                     nodes_per_band: int,
                     ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Midpoint nodes over all three bands with band indices and k values."""
    freqs, weights, bands = [], [], []
    for idx, (lo, hi) in enumerate(spec.band_intervals):
        h = (hi - lo) / nodes_per_band
        freqs.append(lo + (np.arange(nodes_per_band) + 0.5) * h)
        weights.append(np.full(nodes_per_band, h))
        bands.append(np.full(nodes_per_band, idx, dtype=int))
    node_omega = np.concatenate(freqs)
    return (node_omega, np.concatenate(weights), np.concatenate(bands),
            profile.k(node_omega))


def _pathway_weights(spec: MultiLinePumpSpec) -> dict[str, np.ndarray]:
    """Amplitude products per (node band, partner band) for each pathway.

    Pathways are indexed by the number of centre-line pump photons: ``two``
    (both from the centre line, scales as ``e^{2 i theta}``), ``one`` (mixed,
    ``e^{i theta}``), ``zero`` (both from the outer lines).  ``same`` is the
    subset of ``zero`` with both photons from one outer band (diagnostic).
    The ``theta`` factors are applied analytically by the callers, so the
    tables are built at ``theta = 0``.
    """
    a0 = spec.amplitude0
    amp = np.array([a0, _SQRT2 * a0, a0])
    prod = np.outer(amp, amp)
    is_dp = np.array([False, True, False])
    two = np.where(np.outer(is_dp, is_dp), prod, 0.0)
    zero = np.where(np.outer(~is_dp, ~is_dp), prod, 0.0)
    one = prod - two - zero
    same = np.zeros((3, 3))
    same[0, 0] = prod[0, 0]
    same[2, 2] = prod[2, 2]
    return {"two": two, "one": one, "zero": zero, "same": same}


def _diagonal_ranges(geom: _StripeGeometry, m: int) -> tuple[int, int]:
    """Idler-index range [j_lo, j_hi] of anti-diagonal ``m`` on the grid."""
    ns = geom.om_s.size
    ni = geom.om_i.size
    return max(0, m - (ns - 1)), min(ni - 1, m)


def _accumulate_diagonal(profile: DispersionProfile, geom: _StripeGeometry,
                         spec: MultiLinePumpSpec, m: int,
                         node_omega: np.ndarray, node_weight: np.ndarray,
                         node_band: np.ndarray, node_k: np.ndarray,
                         weight_tables: dict[str, np.ndarray],
                         power_term_1_m: float, length_m: float,
                         ) -> dict[str, np.ndarray] | None:
    """Per-pathway joint amplitude along one anti-diagonal, or None if empty."""
    j_lo, j_hi = _diagonal_ranges(geom, m)
    if j_hi < j_lo:
        return None
    j = np.arange(j_lo, j_hi + 1)
    i = m - j
    base = -(geom.k_i[j] + geom.k_s[i]) - power_term_1_m
    s_m = geom.s_lattice[m]
    out = {name: np.zeros(j.size, dtype=complex) for name in weight_tables}
    touched = False
    for omega_n, wt, bn, k_n in zip(node_omega, node_weight, node_band,
                                    node_k):
        partner = s_m - omega_n
        bp = _band_index(spec, partner)
        if bp < 0:
            continue
        k_p = profile.k_or_nan(partner)
        if not math.isfinite(k_p):
            continue
        kernel = phase_matched_amplitude(k_n + k_p + base, length_m)
        touched = True
        for name, table in weight_tables.items():
            w = table[bn, bp]
            if w != 0.0:
                out[name] += (w * wt) * kernel
    return out if touched else None


# --------------------------------------------------------------------------------------
# dense joint amplitude
# --------------------------------------------------------------------------------------

def jsa_multiline(profile: DispersionProfile, spec: MultiLinePumpSpec,
                  omega_s_rad_s: np.ndarray | None = None,
                  omega_i_rad_s: np.ndarray | None = None, *,
                  length_m: float = DEFAULT_LENGTH_M,
                  gamma_w_m: float = DEFAULT_GAMMA_W_M,
                  nodes_per_band: int = 32,
                  sum_half_window_rad_s: float | None = None,
                  grid_points: int = DEFAULT_JSA_POINTS,
                  bands: str = "all") -> JointSpectrum:
    """Joint spectral amplitude of the three-line pump on the main mode.

    Raw (unnormalized) pump-convolution amplitude; cells whose pump-sum
    frequency falls outside the window around twice the degenerate pump
    frequency are zero by construction.  ``bands`` selects the pump photon
    pathways included: ``"all"`` (default), ``"dp-only"`` (both pump photons
    from the centre line, carries ``e^{2 i theta}``), or ``"ndp-only"``
    (both from the outer lines).  Metadata records the same-band diagnostic:
    the relative L2 weight of terms with both pump photons drawn from one
    outer band, which is zero while the bands are well separated.
    """
    if bands not in ("all", "dp-only", "ndp-only"):
        raise ConfigError("jsa_multiline: bands must be one of 'all', "
                          "'dp-only', 'ndp-only'")
    if omega_s_rad_s is None and omega_i_rad_s is None:
        axis, grid_meta = interference_grid(profile, spec, length_m=length_m,
                                            gamma_w_m=gamma_w_m,
                                            points=grid_points)
        omega_s_rad_s, omega_i_rad_s = axis, axis.copy()
    elif omega_s_rad_s is None or omega_i_rad_s is None:
        raise ConfigError("jsa_multiline: provide both grids or neither")
    else:
        grid_meta = {"points": None, "clipped": False}

    geom = _stripe_geometry(profile, spec, omega_s_rad_s, omega_i_rad_s,
                            sum_half_window_rad_s, nodes_per_band)
    node_omega, node_weight, node_band, node_k = _band_node_table(
        profile, spec, nodes_per_band)
    tables = _pathway_weights(spec)
    power_term = gamma_w_m * spec.total_peak_power_w

    phase_dp = complex(math.cos(spec.theta_rad), math.sin(spec.theta_rad))
    pathway_phase = {"zero": 1.0 + 0.0j, "one": phase_dp,
                     "two": phase_dp * phase_dp}
    included = {"all": ("zero", "one", "two"), "dp-only": ("two",),
                "ndp-only": ("zero",)}[bands]

    amp = np.zeros((geom.om_i.size, geom.om_s.size), dtype=complex)
    same_l2_sq = 0.0
    total_l2_sq = 0.0
    d_area = geom.step * geom.step
    for m in geom.m_window:
        diag = _accumulate_diagonal(profile, geom, spec, int(m), node_omega,
                                    node_weight, node_band, node_k, tables,
                                    power_term, length_m)
        if diag is None:
            continue
        j_lo, j_hi = _diagonal_ranges(geom, int(m))
        j = np.arange(j_lo, j_hi + 1)
        line = np.zeros(j.size, dtype=complex)
        for name in included:
            line += pathway_phase[name] * diag[name]
        amp[j, m - j] = line
        same_l2_sq += float(np.vdot(diag["same"], diag["same"]).real) * d_area
        total_l2_sq += float(np.vdot(line, line).real) * d_area

    if total_l2_sq <= 0.0:
        raise NumericError(
            "jsa_multiline: the joint amplitude vanished on the whole grid "
            "(the pump-sum window may not intersect the phase-matched "
            "stripe, or theta put the selected pathways in full "
            "destructive interference on an empty background)")

    same_fraction = math.sqrt(same_l2_sq / total_l2_sq) if bands != "dp-only" \
        else 0.0
    metadata = {
        "kind": "multiline",
        "bands": bands,
        "normalization": "raw",
        "theta_rad": spec.theta_rad,
        "band_centers_rad_s": (spec.omega_ndp1_rad_s, spec.omega_dp_rad_s,
                               spec.omega_ndp2_rad_s),
        "band_width_rad_s": spec.band_width_rad_s,
        "total_peak_power_w": spec.total_peak_power_w,
        "gamma_w_m": gamma_w_m,
        "length_m": length_m,
        "power_term_1_m": power_term,
        "nodes_per_band": int(nodes_per_band),
        "sum_half_window_rad_s": geom.sum_half_window_rad_s,
        "sum_feature_rad_s": 2.0 * spec.band_width_rad_s,
        "same_band_fraction": same_fraction,
        "grid": grid_meta,
        "flags": geom.flags,
    }
    return JointSpectrum(omega_s_rad_s=geom.om_s, omega_i_rad_s=geom.om_i,
                         amplitude=amp, metadata=metadata)


def marginal_intensity(spectrum: JointSpectrum, axis: str = "signal",
                       ) -> tuple[np.ndarray, np.ndarray]:
    """Single-arm intensity of a joint spectrum, normalized to unit peak.

    Integrates ``|F|^2`` over the other photon's frequency; returns
    ``(omega_rad_s, intensity_norm)``.
    """
    inten = spectrum.intensity
    if axis == "signal":
        marg = inten.sum(axis=0) * spectrum.d_omega_i
        omega = spectrum.omega_s_rad_s
    elif axis == "idler":
        marg = inten.sum(axis=1) * spectrum.d_omega_s
        omega = spectrum.omega_i_rad_s
    else:
        raise ConfigError("marginal_intensity: axis must be 'signal' or "
                          "'idler'")
    peak = marg.max()
    if not peak > 0.0:
        raise NumericError("marginal_intensity: the spectrum is identically "
                           "zero")
    return omega, marg / peak


# --------------------------------------------------------------------------------------
# phase sweep
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseSweep:
    """Pair flux against the centre-line phase.

    ``flux`` is in raw convolution units; ``flux_norm`` is referenced to the
    analytic ``theta = 0`` value (``flux_theta0``), which is computed from the
    pathway decomposition and does not require ``0`` on the grid.  ``gram``
    is the 3x3 Hermitian matrix of pathway overlaps ``<F_a, F_b>`` for
    pathway index = number of centre-line pump photons; ``flux_at`` evaluates
    the exact sweep at arbitrary phases from it.
    """

    theta_rad: np.ndarray
    flux: np.ndarray
    flux_norm: np.ndarray
    flux_theta0: float
    gram: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        theta = np.asarray(self.theta_rad, dtype=float)
        object.__setattr__(self, "theta_rad", theta)
        object.__setattr__(self, "flux", np.asarray(self.flux, dtype=float))
        object.__setattr__(self, "flux_norm",
                           np.asarray(self.flux_norm, dtype=float))
        object.__setattr__(self, "gram",
                           np.asarray(self.gram, dtype=complex))
        if self.gram.shape != (3, 3):
            raise ConfigError("phase sweep: the pathway overlap matrix must "
                              "be 3x3")

    def flux_at(self, theta_rad) -> np.ndarray:
        """Exact flux at arbitrary phases from the pathway overlaps."""
        theta = np.atleast_1d(np.asarray(theta_rad, dtype=float))
        coeff = np.exp(1j * np.outer(theta, np.arange(3.0)))
        values = np.einsum("ta,ab,tb->t", coeff.conj(), self.gram,
                           coeff).real
        return values if np.ndim(theta_rad) else values[0]

    def rows(self):
        """(theta_rad, flux_norm) pairs, one per grid phase."""
        for theta, value in zip(self.theta_rad, self.flux_norm):
            yield float(theta), float(value)

    def to_dict(self) -> dict:
        return {
            "theta_rad": [float(t) for t in self.theta_rad],
            "flux_norm": [float(v) for v in self.flux_norm],
            "flux_theta0": float(self.flux_theta0),
            "metadata": self.metadata,
        }


def flux_vs_phase(profile: DispersionProfile, spec: MultiLinePumpSpec,
                  theta_rad: np.ndarray | None = None,
                  omega_s_rad_s: np.ndarray | None = None,
                  omega_i_rad_s: np.ndarray | None = None, *,
                  length_m: float = DEFAULT_LENGTH_M,
                  gamma_w_m: float = DEFAULT_GAMMA_W_M,
                  nodes_per_band: int = 32,
                  sum_half_window_rad_s: float | None = None,
                  grid_points: int = DEFAULT_FLUX_POINTS) -> PhaseSweep:
    """Integrated pair flux against the centre-line phase.

    The joint amplitude decomposes by the number of centre-line pump photons,
    ``F(theta) = F_0 + e^{i theta} F_1 + e^{2 i theta} F_2``, so the sweep
    needs the pathway quadratures once; every requested phase is then exact.
    Anti-diagonals are streamed (the dense grid is never materialized), which
    allows a finer default grid than the dense builder.  The phase grid must
    cover ``[0, pi]``.
    """
    if theta_rad is None:
        theta_rad = np.linspace(0.0, math.pi, DEFAULT_THETA_POINTS)
    theta = np.asarray(theta_rad, dtype=float)
    if theta.ndim != 1 or theta.size < 2:
        raise ConfigError("flux_vs_phase: theta grid must be 1-D with at "
                          "least two phases")
    if not np.all(np.isfinite(theta)):
        raise ConfigError("flux_vs_phase: theta grid contains non-finite "
                          "values")
    if theta.min() > 1.0e-12 or theta.max() < math.pi - 1.0e-12:
        raise ConfigError("flux_vs_phase: the phase grid must cover "
                          "[0, pi]")

    if omega_s_rad_s is None and omega_i_rad_s is None:
        axis, grid_meta = interference_grid(profile, spec, length_m=length_m,
                                            gamma_w_m=gamma_w_m,
                                            points=grid_points)
        omega_s_rad_s, omega_i_rad_s = axis, axis.copy()
    elif omega_s_rad_s is None or omega_i_rad_s is None:
        raise ConfigError("flux_vs_phase: provide both grids or neither")
    else:
        grid_meta = {"points": None, "clipped": False}

    geom = _stripe_geometry(profile, spec, omega_s_rad_s, omega_i_rad_s,
                            sum_half_window_rad_s, nodes_per_band)
    node_omega, node_weight, node_band, node_k = _band_node_table(
        profile, spec, nodes_per_band)
    tables = _pathway_weights(spec)
    power_term = gamma_w_m * spec.total_peak_power_w

    pathway_names = ("zero", "one", "two")
    gram = np.zeros((3, 3), dtype=complex)
    same_l2_sq = 0.0
    d_area = geom.step * geom.step
    for m in geom.m_window:
        diag = _accumulate_diagonal(profile, geom, spec, int(m), node_omega,
                                    node_weight, node_band, node_k, tables,
                                    power_term, length_m)
        if diag is None:
            continue
        vecs = [diag[name] for name in pathway_names]
        for a in range(3):
            for b in range(a, 3):
                gram[a, b] += np.vdot(vecs[a], vecs[b]) * d_area
        same_l2_sq += float(np.vdot(diag["same"], diag["same"]).real) * d_area
    for a in range(3):
        for b in range(a):
            gram[a, b] = np.conj(gram[b, a])

    coeff = np.exp(1j * np.outer(theta, np.arange(3.0)))
    flux = np.einsum("ta,ab,tb->t", coeff.conj(), gram, coeff).real
    flux_theta0 = float(gram.sum().real)
    if not flux_theta0 > 0.0:
        raise NumericError(
            "flux_vs_phase: zero flux at theta = 0 — the grids do not "
            "intersect the phase-matched main emission stripe")
    flux_norm = flux / flux_theta0

    ndp_flux = float(gram[0, 0].real)
    dp_flux = float(gram[2, 2].real)
    metadata = {
        "pump": spec.to_dict(),
        "power_term_1_m": power_term,
        "length_m": length_m,
        "gamma_w_m": gamma_w_m,
        "nodes_per_band": int(nodes_per_band),
        "sum_half_window_rad_s": geom.sum_half_window_rad_s,
        "grid": grid_meta,
        "grid_step_rad_s": geom.step,
        "flux_ndp_pathway": ndp_flux,
        "flux_dp_pathway": dp_flux,
        "flux_mixed_pathway": float(gram[1, 1].real),
        "pathway_rate_ratio": ndp_flux / dp_flux if dp_flux > 0.0
        else math.inf,
        "same_band_fraction": math.sqrt(same_l2_sq / flux_theta0),
        "flags": geom.flags,
    }
    return PhaseSweep(theta_rad=theta, flux=flux, flux_norm=flux_norm,
                      flux_theta0=flux_theta0, gram=gram, metadata=metadata)
