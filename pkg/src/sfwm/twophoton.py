"""Two-photon spectral observables for continuous-wave-pumped four-wave mixing.

Builds the joint spectral amplitude of a photon pair either in the
monochromatic-pump limit (a narrow energy-conservation ridge) or by direct
quadrature over arbitrary pump envelopes; reduces it to the singles spectrum
along the energy-conservation line; and derives the metrics used to
characterise ultra-broadband emission: half-maximum bandwidth structure,
Schmidt-mode content, and the width of the arrival-time-difference
distribution.

Conventions
-----------
Frequencies are angular [rad/s]; joint amplitudes are stored on the outer
product of an idler axis (rows) and a signal axis (columns) and normalized so
that ``sum |F|^2 d_omega_s d_omega_i = 1``.  Singles spectra keep the complex
amplitude; the intensity view is normalized to unit peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._kernels import gaussian_ridge, phase_matched_amplitude
from .dispersion import DispersionProfile
from .errors import (ConfigError, DomainError, NumericError, ResolutionError,
                     TruncatedSpectrumError)
from .phasematch import PumpPair, delta_k_pinned_grid, delta_k_singles
from .sellmeier import lambda_um_from_omega, omega_from_lambda_um

#: Default number of samples for the automatically constructed singles grid.
DEFAULT_SINGLES_POINTS = 120001

#: Default fiber length [m].
DEFAULT_LENGTH_M = 0.25

#: Default total power per pump line [W].
DEFAULT_POWER_W = 5.0

#: Default nonlinear parameter [1/(W m)] (70 per W per km).
DEFAULT_GAMMA_W_M = 70.0e-3

#: Default pump linewidth sigma [rad/s] (50 MHz optical linewidth).
DEFAULT_PUMP_SIGMA_RAD_S = 2.0 * math.pi * 50.0e6

#: Relative level defining the half-maximum analysis.
HALF_MAX_LEVEL = 0.5

#: Valleys dropping below this (relative to peak) are flagged as voids.
VOID_LEVEL = 1.0e-3

#: Satellites whose valleys against the main mode stay above this level are
#: merged into the flat emission region (near-half-maximum shoulders).
FLAT_VALLEY_LEVEL = 0.25

#: Edge intensity (relative to peak) above which a spectrum counts as truncated.
EDGE_INTENSITY_WARNING = 0.01

#: Minimum number of samples the main half-maximum run must span.
MIN_MAIN_RUN_SAMPLES = 50

#: Default energy-conservation ridge width, in signal-axis grid cells.
RIDGE_CELLS_DEFAULT = 4.0

#: A rendered ridge covers this many standard deviations (width = 4 sigma).
RIDGE_SIGMAS = 4.0

#: Gaussian envelopes are integrated over center +/- this many sigma.
GAUSSIAN_SUPPORT_SIGMAS = 4.0

#: Minimum quadrature nodes that must fall across any pump band.
MIN_QUADRATURE_NODES = 8

#: Default quadrature nodes per pump band.
DEFAULT_NODES_PER_BAND = 32

#: Joint spectra must integrate to 1 within this tolerance.
NORMALIZATION_TOL = 1.0e-6

#: Red-side frequency window (below each pump) checked for Raman overlap.
RAMAN_SHIFT_RAD_S = 2.0 * math.pi * 40.0e12

#: Minimum FFT length for the time-difference distribution.
CORRELATION_MIN_PAD = 1 << 22

#: Zero-padding factor (times the grid size) for the time-difference FFT.
CORRELATION_PAD_FACTOR = 32


# --------------------------------------------------------------------------------------
# pump spectral envelopes
# --------------------------------------------------------------------------------------

class SpectralEnvelope:
    """A pump amplitude alpha(omega).

    Concrete envelopes provide a vectorized complex ``amplitude(omega)``,
    their support ``bands()`` (closed intervals covering where the amplitude
    is non-negligible), and the integral ``norm_squared()`` of ``|alpha|^2``.
    """

    def amplitude(self, omega_rad_s):  # pragma: no cover - interface
        raise NotImplementedError

    def bands(self) -> tuple[tuple[float, float], ...]:  # pragma: no cover
        raise NotImplementedError

    def norm_squared(self) -> float:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class GaussianEnvelope(SpectralEnvelope):
    """Gaussian pump line ``exp(-(omega-center)^2 / (2 sigma^2))`` (unit peak)."""

    center_rad_s: float
    sigma_rad_s: float

    def __post_init__(self) -> None:
        if not (self.center_rad_s > 0.0 and math.isfinite(self.center_rad_s)):
            raise ConfigError("envelope: center frequency must be positive")
        if not (self.sigma_rad_s > 0.0 and math.isfinite(self.sigma_rad_s)):
            raise ConfigError("envelope: sigma must be positive")

    def amplitude(self, omega_rad_s):
        om = np.asarray(omega_rad_s, dtype=float)
        z = (om - self.center_rad_s) / self.sigma_rad_s
        return np.exp(-0.5 * z * z).astype(complex)

    def bands(self) -> tuple[tuple[float, float], ...]:
        half = GAUSSIAN_SUPPORT_SIGMAS * self.sigma_rad_s
        return ((self.center_rad_s - half, self.center_rad_s + half),)

    def norm_squared(self) -> float:
        return self.sigma_rad_s * math.sqrt(math.pi)


@dataclass(frozen=True)
class RectBand:
    """One rectangular pump band: complex amplitude on ``center +/- width/2``."""

    center_rad_s: float
    width_rad_s: float
    amplitude: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if not (self.center_rad_s > 0.0 and math.isfinite(self.center_rad_s)):
            raise ConfigError("rect band: center frequency must be positive")
        if not (self.width_rad_s > 0.0 and math.isfinite(self.width_rad_s)):
            raise ConfigError("rect band: width must be positive")
        amp = complex(self.amplitude)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise ConfigError("rect band: amplitude must be finite")

    @property
    def interval(self) -> tuple[float, float]:
        half = 0.5 * self.width_rad_s
        return (self.center_rad_s - half, self.center_rad_s + half)


@dataclass(frozen=True)
class RectBandsEnvelope(SpectralEnvelope):
    """Piecewise-constant pump made of rectangular bands (amplitudes add)."""

    bands_spec: tuple[RectBand, ...]

    def __post_init__(self) -> None:
        if len(self.bands_spec) == 0:
            raise ConfigError("rect envelope: at least one band required")
        object.__setattr__(self, "bands_spec", tuple(self.bands_spec))
        total = self.norm_squared()
        if not (total > 0.0 and math.isfinite(total)):
            raise ConfigError("rect envelope: integrated |alpha|^2 must be "
                              "finite and positive")

    def amplitude(self, omega_rad_s):
        om = np.asarray(omega_rad_s, dtype=float)
        out = np.zeros(om.shape, dtype=complex)
        for band in self.bands_spec:
            lo, hi = band.interval
            out += np.where((om >= lo) & (om <= hi), complex(band.amplitude), 0.0)
        return out

    def bands(self) -> tuple[tuple[float, float], ...]:
        return tuple(sorted(band.interval for band in self.bands_spec))

    def norm_squared(self) -> float:
        return float(sum(abs(complex(b.amplitude)) ** 2 * b.width_rad_s
                         for b in self.bands_spec))


def _envelope_sum_sigma(env1: SpectralEnvelope, env2: SpectralEnvelope) -> float:
    """Characteristic width [rad/s] of the sum-frequency feature of two pumps."""

    def one(env: SpectralEnvelope) -> float:
        if isinstance(env, GaussianEnvelope):
            return env.sigma_rad_s
        widths = [hi - lo for lo, hi in env.bands()]
        return min(widths) / math.sqrt(12.0)

    return math.hypot(one(env1), one(env2))


# --------------------------------------------------------------------------------------
# result containers
# --------------------------------------------------------------------------------------

def _uniform_spacing(axis: np.ndarray, name: str) -> float:
    if axis.ndim != 1 or axis.size < 2:
        raise ConfigError(f"{name}: need a 1-D grid with at least two samples")
    d = np.diff(axis)
    if np.any(d <= 0.0):
        raise ConfigError(f"{name}: grid must be strictly ascending")
    step = float((axis[-1] - axis[0]) / (axis.size - 1))
    if np.max(np.abs(d - step)) > 1.0e-6 * step:
        raise ConfigError(f"{name}: grid must be uniform")
    return step


@dataclass(frozen=True)
class JointSpectrum:
    """Normalized joint spectral amplitude on an idler x signal grid.

    ``amplitude[i, j]`` corresponds to ``(omega_i_rad_s[i], omega_s_rad_s[j])``.
    The normalization convention is unit L2 mass:
    ``sum |F|^2 d_omega_s d_omega_i = 1``.
    """

    omega_s_rad_s: np.ndarray
    omega_i_rad_s: np.ndarray
    amplitude: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        om_s = np.asarray(self.omega_s_rad_s, dtype=float)
        om_i = np.asarray(self.omega_i_rad_s, dtype=float)
        object.__setattr__(self, "omega_s_rad_s", om_s)
        object.__setattr__(self, "omega_i_rad_s", om_i)
        ds = _uniform_spacing(om_s, "joint spectrum signal axis")
        di = _uniform_spacing(om_i, "joint spectrum idler axis")
        object.__setattr__(self, "_d_omega_s", ds)
        object.__setattr__(self, "_d_omega_i", di)
        amp = np.asarray(self.amplitude)
        if amp.shape != (om_i.size, om_s.size):
            raise ConfigError("joint spectrum: amplitude shape must be "
                              "(idler points, signal points)")
        object.__setattr__(self, "amplitude", amp)

    @property
    def d_omega_s(self) -> float:
        return self._d_omega_s

    @property
    def d_omega_i(self) -> float:
        return self._d_omega_i

    @property
    def intensity(self) -> np.ndarray:
        """|F|^2 (not renormalized)."""
        return np.abs(self.amplitude) ** 2

    @property
    def total_probability(self) -> float:
        """Integral of |F|^2 over the grid (1 for a normalized state)."""
        mass = np.sum(np.abs(self.amplitude) ** 2, dtype=np.float64)
        return float(mass * self._d_omega_s * self._d_omega_i)

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return abs(self.total_probability - 1.0) <= tol


@dataclass(frozen=True)
class SinglesSpectrum:
    """Single-arm emission amplitude along the energy-conservation line.

    The complex amplitude is retained (it carries the phase used by the
    time-difference transform); the ``intensity`` view is normalized to unit
    peak.
    """

    omega_rad_s: np.ndarray
    amplitude: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        om = np.asarray(self.omega_rad_s, dtype=float)
        amp = np.asarray(self.amplitude)
        if om.ndim != 1 or om.size < 9:
            raise ConfigError("singles spectrum: need a 1-D grid with at "
                              "least nine samples")
        if np.any(np.diff(om) <= 0.0):
            raise ConfigError("singles spectrum: grid must be strictly ascending")
        if amp.shape != om.shape:
            raise ConfigError("singles spectrum: amplitude/grid size mismatch")
        object.__setattr__(self, "omega_rad_s", om)
        object.__setattr__(self, "amplitude", amp)

    @property
    def intensity(self) -> np.ndarray:
        """|f|^2 scaled to a unit peak (the peak sample is exactly 1.0)."""
        inten = np.abs(self.amplitude) ** 2
        peak = inten.max()
        if not peak > 0.0:
            raise NumericError("singles spectrum: amplitude vanishes everywhere")
        return inten / peak

    @property
    def edge_fraction(self) -> float:
        """Larger of the two window-edge intensities, relative to the peak."""
        inten = self.intensity
        return float(max(inten[0], inten[-1]))


@dataclass(frozen=True)
class SatellitePair:
    """A pair of satellite emission peaks straddling the main mode.

    The outer-slope width spans from the outermost half-maximum crossing of
    the low-frequency member to the outermost crossing of the high-frequency
    member.
    """

    low_peak_rad_s: float
    high_peak_rad_s: float
    low_interval_rad_s: tuple[float, float]
    high_interval_rad_s: tuple[float, float]
    outer_width_rad_s: float
    outer_width_nm: float

    def to_dict(self) -> dict:
        return {
            "low_peak_rad_s": self.low_peak_rad_s,
            "high_peak_rad_s": self.high_peak_rad_s,
            "low_interval_rad_s": list(self.low_interval_rad_s),
            "high_interval_rad_s": list(self.high_interval_rad_s),
            "outer_width_rad_s": self.outer_width_rad_s,
            "outer_width_nm": self.outer_width_nm,
        }


@dataclass(frozen=True)
class BandwidthReport:
    """Half-maximum structure of a singles spectrum.

    The main mode is the half-maximum run containing the zero-dispersion
    frequency; satellite runs are paired low/high about it, ordered inner to
    outer.  The *flat* region extends the main mode across any adjacent
    satellite pairs whose valleys stay above ``FLAT_VALLEY_LEVEL`` (this is
    the emission band a near-merged spectrum presents; power-induced ripple
    can push such valleys slightly below the half-maximum level).  The
    fractional bandwidth refers to the flat region.  Widths in nm are
    vacuum-wavelength widths of the corresponding frequency intervals.
    """

    omega_zd_rad_s: float
    main_interval_rad_s: tuple[float, float]
    main_fwhm_rad_s: float
    main_fwhm_nm: float
    flat_interval_rad_s: tuple[float, float]
    flat_fwhm_rad_s: float
    flat_fwhm_nm: float
    fractional_bandwidth: float
    satellite_peaks_rad_s: tuple[float, ...]
    satellite_pairs: tuple[SatellitePair, ...]
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        widths = [self.main_fwhm_rad_s]
        widths += [p.outer_width_rad_s for p in self.satellite_pairs]
        for narrower, wider in zip(widths, widths[1:]):
            if wider < narrower * (1.0 - 1.0e-9):
                raise NumericError(
                    "bandwidth report: satellite widths must enclose the "
                    "main mode (inner to outer ordering violated)")
        if self.flat_fwhm_rad_s < self.main_fwhm_rad_s * (1.0 - 1.0e-9):
            raise NumericError(
                "bandwidth report: the flat region cannot be narrower than "
                "the main mode")

    @property
    def inner_satellite_width_nm(self) -> float | None:
        return self.satellite_pairs[0].outer_width_nm if self.satellite_pairs else None

    @property
    def outer_satellite_width_nm(self) -> float | None:
        return self.satellite_pairs[-1].outer_width_nm if self.satellite_pairs else None

    def to_dict(self) -> dict:
        return {
            "omega_zd_rad_s": self.omega_zd_rad_s,
            "main_interval_rad_s": list(self.main_interval_rad_s),
            "main_fwhm_rad_s": self.main_fwhm_rad_s,
            "main_fwhm_nm": self.main_fwhm_nm,
            "flat_interval_rad_s": list(self.flat_interval_rad_s),
            "flat_fwhm_rad_s": self.flat_fwhm_rad_s,
            "flat_fwhm_nm": self.flat_fwhm_nm,
            "fractional_bandwidth": self.fractional_bandwidth,
            "satellite_peaks_rad_s": list(self.satellite_peaks_rad_s),
            "satellite_pairs": [p.to_dict() for p in self.satellite_pairs],
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class SchmidtResult:
    """Schmidt number together with its resolution caveat."""

    schmidt_number: float
    lower_bound_only: bool
    caveat: str | None = None


@dataclass(frozen=True)
class CorrelationTime:
    """Width of the arrival-time-difference distribution."""

    tau_s: float
    truncation_warning: bool
    edge_fraction: float
    include_phase: bool
    pad_points: int
    omega_window_rad_s: tuple[float, float] | None = None


# --------------------------------------------------------------------------------------
# singles spectrum
# --------------------------------------------------------------------------------------

def _pump_record(pump: PumpPair) -> dict:
    return {
        "omega1_rad_s": pump.omega1_rad_s,
        "omega2_rad_s": pump.omega2_rad_s,
        "power1_w": pump.power1_w,
        "power2_w": pump.power2_w,
        "gamma1_w_m": pump.gamma1_w_m,
        "gamma2_w_m": pump.gamma2_w_m,
    }


def default_singles_grid(profile: DispersionProfile, pump: PumpPair,
                         npoints: int = DEFAULT_SINGLES_POINTS) -> np.ndarray:
    """Symmetric frequency grid for the singles spectrum.

    The grid is centred on half the pump frequency sum and clipped so that
    both an emission frequency and its energy-conserving partner stay inside
    the dispersion validity window; grid points therefore come in partner
    pairs mirrored about the centre.
    """
    if npoints < 9:
        raise ConfigError("singles grid: need at least nine points")
    s = pump.omega_sum
    lo = max(profile.omega_min, s - profile.omega_max)
    hi = min(profile.omega_max, s - profile.omega_min)
    if not hi > lo:
        raise DomainError("singles grid: the energy-conservation line misses "
                          "the dispersion validity window")
    half = 0.5 * s
    span = min(half - lo, hi - half)
    if not span > 0.0:
        raise DomainError("singles grid: pump sum centre lies outside the "
                          "dispersion validity window")
    return np.linspace(half - span, half + span, int(npoints))


def singles_spectrum(profile: DispersionProfile, pump: PumpPair,
                     length_m: float = DEFAULT_LENGTH_M,
                     omega_rad_s: np.ndarray | None = None,
                     npoints: int = DEFAULT_SINGLES_POINTS) -> SinglesSpectrum:
    """Single-arm emission amplitude for monochromatic pumps.

    The partner of every emission frequency ``omega`` sits at
    ``omega1 + omega2 - omega``; the amplitude is the phase-matched kernel
    ``sinc(L dk / 2) exp(i L dk / 2)`` of the resulting wavevector mismatch,
    with the complex phase retained.
    """
    if not length_m > 0.0:
        raise ConfigError("singles spectrum: length must be positive")
    if omega_rad_s is None:
        omega = default_singles_grid(profile, pump, npoints)
    else:
        omega = np.asarray(omega_rad_s, dtype=float)
    dk = delta_k_singles(profile, pump, omega)
    amp = phase_matched_amplitude(np.asarray(dk, dtype=float), float(length_m))
    try:
        omega_zd = profile.zero_dispersion_frequency()
    except NumericError:
        omega_zd = None
    metadata = {
        "kind": "cw-singles",
        "pump": _pump_record(pump),
        "length_m": float(length_m),
        "omega_zd_rad_s": omega_zd,
    }
    return SinglesSpectrum(omega_rad_s=omega, amplitude=amp, metadata=metadata)


# --------------------------------------------------------------------------------------
# half-maximum analysis
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class _Run:
    left_rad_s: float
    right_rad_s: float
    first_index: int
    last_index: int
    peak_rad_s: float
    peak_value: float
    touches_left_edge: bool
    touches_right_edge: bool

    @property
    def touches_edge(self) -> bool:
        return self.touches_left_edge or self.touches_right_edge


def _half_max_runs(omega: np.ndarray, inten: np.ndarray,
                   level: float) -> list[_Run]:
    """Contiguous runs with ``inten >= level`` and interpolated crossings."""
    above = inten >= level
    if not np.any(above):
        return []
    flat = above.astype(np.int8)
    starts = list(np.flatnonzero(np.diff(flat) == 1) + 1)
    ends = list(np.flatnonzero(np.diff(flat) == -1))
    if above[0]:
        starts.insert(0, 0)
    if above[-1]:
        ends.append(inten.size - 1)
    runs: list[_Run] = []
    for i0, i1 in zip(starts, ends):
        if i0 == 0:
            left, touches_left = float(omega[0]), True
        else:
            y0, y1 = inten[i0 - 1], inten[i0]
            t = (level - y0) / (y1 - y0)
            left = float(omega[i0 - 1] + t * (omega[i0] - omega[i0 - 1]))
            touches_left = False
        if i1 == inten.size - 1:
            right, touches_right = float(omega[-1]), True
        else:
            y0, y1 = inten[i1], inten[i1 + 1]
            t = (y0 - level) / (y0 - y1)
            right = float(omega[i1] + t * (omega[i1 + 1] - omega[i1]))
            touches_right = False
        rel_peak = int(np.argmax(inten[i0:i1 + 1]))
        runs.append(_Run(left_rad_s=left, right_rad_s=right,
                         first_index=i0, last_index=i1,
                         peak_rad_s=float(omega[i0 + rel_peak]),
                         peak_value=float(inten[i0 + rel_peak]),
                         touches_left_edge=touches_left,
                         touches_right_edge=touches_right))
    return runs


def _interval_width_nm(lo_rad_s: float, hi_rad_s: float) -> float:
    lam_lo_um = float(lambda_um_from_omega(hi_rad_s))
    lam_hi_um = float(lambda_um_from_omega(lo_rad_s))
    return (lam_hi_um - lam_lo_um) * 1.0e3


def bandwidth_report(spectrum: SinglesSpectrum,
                     omega_zd_rad_s: float | None = None) -> BandwidthReport:
    """Half-maximum bandwidth structure of a singles spectrum.

    The main mode is the half-maximum run containing the zero-dispersion
    frequency (power-induced ripple may move the global peak off-centre).
    Satellite runs are paired low/high about the main mode and reported inner
    to outer with their outer-slope widths.
    """
    omega = spectrum.omega_rad_s
    inten = spectrum.intensity
    if omega_zd_rad_s is None:
        omega_zd_rad_s = spectrum.metadata.get("omega_zd_rad_s")
    if omega_zd_rad_s is None:
        raise ConfigError("bandwidth report: a zero-dispersion frequency is "
                          "required (none in the spectrum metadata)")
    omega_zd = float(omega_zd_rad_s)

    runs = _half_max_runs(omega, inten, HALF_MAX_LEVEL)
    if not runs:
        raise NumericError("bandwidth report: no half-maximum region found")

    flags: list[str] = []
    main = None
    for run in runs:
        if run.left_rad_s <= omega_zd <= run.right_rad_s:
            main = run
            break
    if main is None:
        main = max(runs, key=lambda r: r.peak_value)
        flags.append("main-mode-off-zd")
    if main.touches_left_edge:
        raise TruncatedSpectrumError(
            "bandwidth report: the main emission mode reaches the "
            f"low-frequency window edge at {omega[0]:.6g} rad/s; enlarge the grid")
    if main.touches_right_edge:
        raise TruncatedSpectrumError(
            "bandwidth report: the main emission mode reaches the "
            f"high-frequency window edge at {omega[-1]:.6g} rad/s; enlarge the grid")
    if main.last_index - main.first_index + 1 < MIN_MAIN_RUN_SAMPLES:
        raise ResolutionError(
            "bandwidth report: the main emission mode spans fewer than "
            f"{MIN_MAIN_RUN_SAMPLES} samples; refine the grid")

    lows = sorted((r for r in runs if r.right_rad_s < main.left_rad_s),
                  key=lambda r: -r.peak_rad_s)
    highs = sorted((r for r in runs if r.left_rad_s > main.right_rad_s),
                   key=lambda r: r.peak_rad_s)
    if any(r.touches_edge for r in lows + highs):
        flags.append("satellite-truncated")
    if len(lows) != len(highs):
        flags.append("unpaired-satellite")

    pairs: list[SatellitePair] = []
    for low, high in zip(lows, highs):
        width = high.right_rad_s - low.left_rad_s
        pairs.append(SatellitePair(
            low_peak_rad_s=low.peak_rad_s,
            high_peak_rad_s=high.peak_rad_s,
            low_interval_rad_s=(low.left_rad_s, low.right_rad_s),
            high_interval_rad_s=(high.left_rad_s, high.right_rad_s),
            outer_width_rad_s=width,
            outer_width_nm=_interval_width_nm(low.left_rad_s, high.right_rad_s),
        ))

    def _valley_ok(inner_last: int, outer_first: int) -> bool:
        gap = inten[inner_last + 1:outer_first]
        return gap.size == 0 or float(gap.min()) >= FLAT_VALLEY_LEVEL

    flat_left, flat_right = main.left_rad_s, main.right_rad_s
    lo_idx, hi_idx = main.first_index, main.last_index
    merged_pairs = 0
    for low, high in zip(lows, highs):
        if not (_valley_ok(low.last_index, lo_idx)
                and _valley_ok(hi_idx, high.first_index)):
            break
        flat_left, flat_right = low.left_rad_s, high.right_rad_s
        lo_idx, hi_idx = low.first_index, high.last_index
        merged_pairs += 1
    if merged_pairs:
        flags.append("merged-satellites")

    ordered = sorted(runs, key=lambda r: r.first_index)
    for left_run, right_run in zip(ordered, ordered[1:]):
        gap = inten[left_run.last_index + 1:right_run.first_index]
        if gap.size and float(gap.min()) < VOID_LEVEL:
            if "spectral-void" not in flags:
                flags.append("spectral-void")

    pump = spectrum.metadata.get("pump")
    if pump is not None:
        for key in ("omega1_rad_s", "omega2_rad_s"):
            om_p = pump.get(key)
            if om_p is None:
                continue
            lo_win, hi_win = om_p - RAMAN_SHIFT_RAD_S, om_p
            overlap = any(r.right_rad_s >= lo_win and r.left_rad_s <= hi_win
                          for r in runs)
            if overlap and "raman-window-overlap" not in flags:
                flags.append("raman-window-overlap")

    fwhm = main.right_rad_s - main.left_rad_s
    flat_fwhm = flat_right - flat_left
    return BandwidthReport(
        omega_zd_rad_s=omega_zd,
        main_interval_rad_s=(main.left_rad_s, main.right_rad_s),
        main_fwhm_rad_s=fwhm,
        main_fwhm_nm=_interval_width_nm(main.left_rad_s, main.right_rad_s),
        flat_interval_rad_s=(flat_left, flat_right),
        flat_fwhm_rad_s=flat_fwhm,
        flat_fwhm_nm=_interval_width_nm(flat_left, flat_right),
        fractional_bandwidth=flat_fwhm / omega_zd,
        satellite_peaks_rad_s=tuple(r.peak_rad_s for r in lows + highs),
        satellite_pairs=tuple(pairs),
        flags=tuple(flags),
    )


def count_emission_peaks(spectrum: SinglesSpectrum,
                         lambda_window_um: tuple[float, float] | None = None,
                         level: float = HALF_MAX_LEVEL) -> int:
    """Number of disjoint half-maximum regions inside a wavelength window.

    The intensity is renormalized to its maximum inside the window, so the
    count reflects structure visible in a plot restricted to that window.
    """
    omega = spectrum.omega_rad_s
    inten = np.abs(spectrum.amplitude) ** 2
    if lambda_window_um is not None:
        lam_lo, lam_hi = sorted(float(v) for v in lambda_window_um)
        om_hi = float(omega_from_lambda_um(lam_lo))
        om_lo = float(omega_from_lambda_um(lam_hi))
        keep = (omega >= om_lo) & (omega <= om_hi)
        if not np.any(keep):
            raise DomainError("peak count: the wavelength window misses the grid")
        omega, inten = omega[keep], inten[keep]
    peak = inten.max()
    if not peak > 0.0:
        raise NumericError("peak count: spectrum vanishes in the window")
    return len(_half_max_runs(omega, inten / peak, level))


# --------------------------------------------------------------------------------------
# joint spectral amplitude
# --------------------------------------------------------------------------------------

def _phase_matched_or_zero(dk: np.ndarray, length_m: float) -> np.ndarray:
    mask = ~np.isfinite(dk)
    dk_filled = np.where(mask, 0.0, dk)
    out = phase_matched_amplitude(dk_filled, length_m)
    if np.any(mask):
        out = np.where(mask, 0.0 + 0.0j, out)
    return out


def _normalize_amplitude(raw: np.ndarray, d_s: float, d_i: float,
                         what: str) -> np.ndarray:
    mass = float(np.sum(np.abs(raw) ** 2, dtype=np.float64) * d_s * d_i)
    if not (math.isfinite(mass) and mass > 0.0):
        raise NumericError(f"{what}: joint amplitude has no mass on this grid "
                           "(energy-conservation ridge outside the window?)")
    return raw / math.sqrt(mass)


def jsa_cw(profile: DispersionProfile, pump: PumpPair, length_m: float,
           omega_s_rad_s: np.ndarray, omega_i_rad_s: np.ndarray,
           ridge_width_rad_s: float | None = None) -> JointSpectrum:
    """Joint spectral amplitude in the monochromatic-pump limit.

    Energy conservation confines the state to the line
    ``omega_s + omega_i = omega1 + omega2``; the delta function on that line
    is rendered as a unit-area Gaussian ridge of the given width (default:
    ``RIDGE_CELLS_DEFAULT`` signal-axis grid cells, recorded in metadata).
    The phase-matched kernel is evaluated with the pump wavevectors pinned at
    the physical pump frequencies.
    """
    if not length_m > 0.0:
        raise ConfigError("joint spectrum: length must be positive")
    om_s = np.asarray(omega_s_rad_s, dtype=float)
    om_i = np.asarray(omega_i_rad_s, dtype=float)
    d_s = _uniform_spacing(om_s, "joint spectrum signal axis")
    d_i = _uniform_spacing(om_i, "joint spectrum idler axis")
    if ridge_width_rad_s is None:
        width = RIDGE_CELLS_DEFAULT * d_s
    else:
        width = float(ridge_width_rad_s)
        if not width > 0.0:
            raise ConfigError("joint spectrum: ridge width must be positive")
    flags: list[str] = []
    if width < min(d_s, d_i):
        flags.append("ridge-unresolved")
    sigma = width / RIDGE_SIGMAS

    dk = delta_k_pinned_grid(profile, pump, om_s, om_i)
    kernel = _phase_matched_or_zero(dk, float(length_m))
    s_grid = np.add.outer(om_i, om_s)
    ridge = gaussian_ridge(s_grid, pump.omega_sum, sigma)
    amp = _normalize_amplitude(ridge * kernel, d_s, d_i, "cw joint spectrum")
    metadata = {
        "kind": "cw-ridge",
        "pump": _pump_record(pump),
        "length_m": float(length_m),
        "ridge_width_rad_s": width,
        "ridge_sigma_rad_s": sigma,
        "sum_feature_rad_s": sigma,
        "normalization": "unit-l2",
        "flags": tuple(flags),
    }
    return JointSpectrum(omega_s_rad_s=om_s, omega_i_rad_s=om_i,
                         amplitude=amp, metadata=metadata)


def _band_nodes(env: SpectralEnvelope,
                nodes_per_band: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint quadrature nodes and weights covering an envelope's bands."""
    nodes, weights = [], []
    for lo, hi in env.bands():
        step = (hi - lo) / nodes_per_band
        nodes.append(lo + (np.arange(nodes_per_band) + 0.5) * step)
        weights.append(np.full(nodes_per_band, step))
    return np.concatenate(nodes), np.concatenate(weights)


def _quadrature_half(profile: DispersionProfile,
                     node_env: SpectralEnvelope, other_env: SpectralEnvelope,
                     power_term: float, length_m: float,
                     k_pair_grid: np.ndarray, s_grid: np.ndarray,
                     nodes_per_band: int) -> np.ndarray:
    """One orientation of the pump-convolution integral.

    Integrates over the frequency of the ``node_env`` pump; the other pump
    frequency follows from energy conservation.  The integrand is written so
    that swapping the two envelopes (and integrating over the other one)
    reproduces the same sum bitwise.
    """
    nodes, weights = _band_nodes(node_env, nodes_per_band)
    out = np.zeros(s_grid.shape, dtype=complex)
    for node, weight in zip(nodes, weights):
        partner = s_grid - node
        k_node = profile.k_or_nan(node)
        if not np.isfinite(k_node):
            continue
        with np.errstate(invalid="ignore"):
            dk = (k_node + profile.k_or_nan(partner)) - k_pair_grid - power_term
        kernel = _phase_matched_or_zero(dk, length_m)
        alpha = complex(node_env.amplitude(node)) * other_env.amplitude(partner)
        out += (alpha * kernel) * weight
    return out


def jsa_general(profile: DispersionProfile,
                envelope1: SpectralEnvelope, envelope2: SpectralEnvelope,
                length_m: float,
                omega_s_rad_s: np.ndarray, omega_i_rad_s: np.ndarray,
                power1_w: float = 0.0, power2_w: float = 0.0,
                gamma1_w_m: float = 0.0, gamma2_w_m: float = 0.0,
                nodes_per_band: int = DEFAULT_NODES_PER_BAND) -> JointSpectrum:
    """Joint spectral amplitude for arbitrary pump envelopes.

    Computes the pump-convolution integral
    ``F = integral d_omega' alpha1(omega') alpha2(s - omega') kernel(...)``
    by midpoint quadrature over the envelope support bands, symmetrized over
    the two pump orderings so that swapping the envelopes (together with
    their powers) leaves the result bitwise unchanged.
    """
    if not length_m > 0.0:
        raise ConfigError("joint spectrum: length must be positive")
    if power1_w < 0.0 or power2_w < 0.0 or gamma1_w_m < 0.0 or gamma2_w_m < 0.0:
        raise ConfigError("joint spectrum: powers and nonlinear parameters "
                          "must be non-negative")
    if nodes_per_band < MIN_QUADRATURE_NODES:
        raise ResolutionError(
            f"joint spectrum: fewer than {MIN_QUADRATURE_NODES} quadrature "
            "nodes per pump band")
    widths1 = [hi - lo for lo, hi in envelope1.bands()]
    widths2 = [hi - lo for lo, hi in envelope2.bands()]
    coarse = max(max(widths1), max(widths2)) / nodes_per_band
    narrow = min(min(widths1), min(widths2))
    if narrow < MIN_QUADRATURE_NODES * coarse:
        raise ResolutionError(
            "joint spectrum: a pump band is narrower than "
            f"{MIN_QUADRATURE_NODES} quadrature steps; raise nodes_per_band")

    om_s = np.asarray(omega_s_rad_s, dtype=float)
    om_i = np.asarray(omega_i_rad_s, dtype=float)
    d_s = _uniform_spacing(om_s, "joint spectrum signal axis")
    d_i = _uniform_spacing(om_i, "joint spectrum idler axis")
    power_term = gamma1_w_m * power1_w + gamma2_w_m * power2_w

    with np.errstate(invalid="ignore"):
        k_pair_grid = np.add.outer(profile.k_or_nan(om_i), profile.k_or_nan(om_s))
    s_grid = np.add.outer(om_i, om_s)

    half_a = _quadrature_half(profile, envelope1, envelope2, power_term,
                              float(length_m), k_pair_grid, s_grid,
                              int(nodes_per_band))
    half_b = _quadrature_half(profile, envelope2, envelope1, power_term,
                              float(length_m), k_pair_grid, s_grid,
                              int(nodes_per_band))
    amp = _normalize_amplitude(0.5 * (half_a + half_b), d_s, d_i,
                               "general joint spectrum")
    metadata = {
        "kind": "general",
        "length_m": float(length_m),
        "power_term_1_m": power_term,
        "powers_w": (float(power1_w), float(power2_w)),
        "gammas_w_m": (float(gamma1_w_m), float(gamma2_w_m)),
        "nodes_per_band": int(nodes_per_band),
        "sum_feature_rad_s": _envelope_sum_sigma(envelope1, envelope2),
        "normalization": "unit-l2",
        "flags": (),
    }
    return JointSpectrum(omega_s_rad_s=om_s, omega_i_rad_s=om_i,
                         amplitude=amp, metadata=metadata)


# --------------------------------------------------------------------------------------
# Schmidt decomposition
# --------------------------------------------------------------------------------------

def schmidt_number(state: JointSpectrum) -> float:
    """Schmidt number ``K = 1 / sum p_n^2`` of a normalized joint spectrum.

    ``p_n`` are the squared singular values (normalized to unit sum) of the
    amplitude matrix scaled by the square root of the grid weights, which
    makes the result converge under grid refinement for smooth states.
    """
    if not state.is_normalized():
        raise ConfigError("schmidt number: joint spectrum must be normalized "
                          f"(integral = {state.total_probability:.6g})")
    weighted = state.amplitude * np.sqrt(state.d_omega_s * state.d_omega_i)
    singular = np.linalg.svd(weighted, compute_uv=False)
    p = singular.astype(np.float64) ** 2
    total = p.sum()
    if not total > 0.0:
        raise NumericError("schmidt number: amplitude matrix has no mass")
    p /= total
    return float(1.0 / np.sum(p * p))


def schmidt_report(state: JointSpectrum) -> SchmidtResult:
    """Schmidt number plus a caveat when the grid limits it from below.

    States confined to an energy-conservation feature narrower than a grid
    cell (monochromatic-ridge renderings, unresolved pump linewidths) gain
    Schmidt modes under refinement, so the finite-grid value is only a lower
    bound.
    """
    value = schmidt_number(state)
    feature = state.metadata.get("sum_feature_rad_s")
    cell = min(state.d_omega_s, state.d_omega_i)
    lower_bound_only = feature is not None and feature < cell
    caveat = None
    if lower_bound_only:
        caveat = ("grid cells are wider than the energy-conservation feature; "
                  "the Schmidt number keeps growing under grid refinement and "
                  "this value is a lower bound")
    return SchmidtResult(schmidt_number=value,
                         lower_bound_only=lower_bound_only, caveat=caveat)


# --------------------------------------------------------------------------------------
# correlation time
# --------------------------------------------------------------------------------------

def _fwhm_from_samples(values: np.ndarray, spacing: float) -> float:
    """FWHM of a sampled peak with sub-bin linear interpolation."""
    peak_idx = int(np.argmax(values))
    half = 0.5 * values[peak_idx]
    left = peak_idx
    while left > 0 and values[left] > half:
        left -= 1
    if values[left] > half:
        raise NumericError("width estimate: peak reaches the transform edge")
    frac = (half - values[left]) / (values[left + 1] - values[left])
    left_pos = left + frac
    right = peak_idx
    while right < values.size - 1 and values[right] > half:
        right += 1
    if values[right] > half:
        raise NumericError("width estimate: peak reaches the transform edge")
    frac = (values[right - 1] - half) / (values[right - 1] - values[right])
    right_pos = right - 1 + frac
    return float((right_pos - left_pos) * spacing)


def correlation_time(spectrum: SinglesSpectrum, include_phase: bool = True,
                     pad_factor: int = CORRELATION_PAD_FACTOR,
                     omega_window_rad_s: tuple[float, float] | None = None,
                     ) -> CorrelationTime:
    """FWHM of the arrival-time-difference distribution.

    Energy conservation ties the two emission frequencies of a pair to the
    fixed pump sum ``S``, so a singles amplitude sampled at ``omega`` fully
    determines the joint amplitude along the anti-diagonal.  The physically
    meaningful transform variable for the arrival-time *difference* is the
    frequency difference ``omega_s - omega_i = 2 * (omega - S / 2)``, which
    runs twice as fast as the singles grid; the time step of the transform
    is therefore ``pi / (pad * d_omega)`` rather than the naive
    ``2 * pi / (pad * d_omega)``.

    ``omega_window_rad_s`` restricts the transform to one emission region
    (for instance the flat region reported by :func:`bandwidth_report`):
    amplitude outside the window is zeroed before transforming.  Without a
    window every phase-matched feature on the grid contributes, which mixes
    distinct emission modes into a single time-difference width.

    ``include_phase=False`` transforms the modulus of the amplitude instead
    (for diagnostics).
    """
    omega = spectrum.omega_rad_s
    d = np.diff(omega)
    step = float(d[0])
    if np.max(np.abs(d - step)) > 1.0e-6 * step:
        raise ConfigError("correlation time: a uniform frequency grid is required")
    amp = spectrum.amplitude if include_phase else np.abs(spectrum.amplitude)
    if omega_window_rad_s is not None:
        lo, hi = float(omega_window_rad_s[0]), float(omega_window_rad_s[1])
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigError(
                "correlation time: omega_window_rad_s must be a finite (low, high) "
                f"pair with low < high, got ({lo!r}, {hi!r})")
        keep = (omega >= lo) & (omega <= hi)
        if not keep.any():
            raise ConfigError(
                "correlation time: omega_window_rad_s does not overlap the "
                "frequency grid")
        amp = np.where(keep, amp, 0.0)
        window_peak = float(np.max(np.abs(amp)))
        if window_peak == 0.0:
            raise NumericError(
                "correlation time: the windowed amplitude is identically zero")
        amp_edge = np.abs(amp)
        edge = float(max(amp_edge[0], amp_edge[-1]) ** 2 / window_peak**2)
    else:
        edge = spectrum.edge_fraction
    n = omega.size
    pad = max(CORRELATION_MIN_PAD, 1 << int(pad_factor * n - 1).bit_length())
    transform = np.fft.fftshift(np.fft.fft(amp, n=pad))
    prob = np.abs(transform) ** 2
    dt = math.pi / (pad * step)
    tau = _fwhm_from_samples(prob, dt)
    window_out = None
    if omega_window_rad_s is not None:
        window_out = (float(omega_window_rad_s[0]), float(omega_window_rad_s[1]))
    return CorrelationTime(tau_s=tau,
                           truncation_warning=edge > EDGE_INTENSITY_WARNING,
                           edge_fraction=edge,
                           include_phase=bool(include_phase),
                           pad_points=int(pad),
                           omega_window_rad_s=window_out)
