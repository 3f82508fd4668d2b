"""Design and analysis of ultra-broadband photon-pair sources.

Spontaneous four-wave mixing in a dispersion-engineered photonic crystal
fiber, modeled as a silica strand in a uniform air-hole cladding: chromatic
dispersion of the fundamental guided mode, phase-matching structure of the
continuous-wave mismatch, two-photon joint spectra and single-arm bandwidth
figures, the flat-emission design recipe around a quartic-dispersion zero,
and nonlinear two-photon interference between degenerate and non-degenerate
pump-pair pathways.

Hot numerical kernels compile with numba when available; set the
environment variable ``SFWM_NO_NUMBA=1`` before import to force the pure
numpy lane (results are identical; see ``benchmarks/``).
"""

from ._version import __version__
from .errors import (ConfigError, DomainError, ModeSolveError, NumericError,
                     PumpSpecError, ResolutionError, SfwmError,
                     SingularCurvatureError, TruncatedSpectrumError,
                     ValidityWindowError, exit_code_for)
from .sellmeier import (FUSED_SILICA, SellmeierModel, lambda_um_from_omega,
                        omega_from_lambda_um)
from .modesolver import FiberGeometry, effective_index, propagation_constant
from .dispersion import DispersionProfile, build_profile, build_profile_um
from .phasematch import (PhasematchContour, PumpPair, TaylorCoefficients,
                         contour_curvature_at_origin, delta_k_cw,
                         delta_k_grid, delta_k_singles, delta_k_taylor4,
                         taylor_coefficients, trace_contours,
                         vertex_residuals)
from .twophoton import (BandwidthReport, CorrelationTime, GaussianEnvelope,
                        JointSpectrum, RectBand, RectBandsEnvelope,
                        SatellitePair, SinglesSpectrum, bandwidth_report,
                        correlation_time, count_emission_peaks, jsa_cw,
                        jsa_general, schmidt_number, schmidt_report,
                        singles_spectrum)
from .design import (ContinuumInterval, DesignConditionsReport, NdpPair,
                     PumpSolutionSet, SweepRow, bandwidth_sweep,
                     design_zero_dispersion_frequency,
                     dp_ndp_symmetry_residual, evaluate_conditions,
                     find_k4_zero_radius, find_ndp_pairs)
from .interference import (MultiLinePumpSpec, PhaseSweep, flux_vs_phase,
                           interference_grid, jsa_multiline,
                           marginal_intensity)

__all__ = [
    "__version__",
    # errors
    "SfwmError", "NumericError", "ConfigError", "DomainError",
    "ValidityWindowError", "ModeSolveError", "TruncatedSpectrumError",
    "SingularCurvatureError", "PumpSpecError", "ResolutionError",
    "exit_code_for",
    # material + geometry
    "SellmeierModel", "FUSED_SILICA", "FiberGeometry",
    "omega_from_lambda_um", "lambda_um_from_omega",
    "effective_index", "propagation_constant",
    # dispersion
    "DispersionProfile", "build_profile", "build_profile_um",
    # phase matching
    "PumpPair", "TaylorCoefficients", "PhasematchContour",
    "delta_k_cw", "delta_k_grid", "delta_k_singles", "delta_k_taylor4",
    "taylor_coefficients", "contour_curvature_at_origin", "trace_contours",
    "vertex_residuals",
    # two-photon state
    "GaussianEnvelope", "RectBand", "RectBandsEnvelope", "JointSpectrum",
    "SinglesSpectrum", "SatellitePair", "BandwidthReport", "CorrelationTime",
    "singles_spectrum", "bandwidth_report", "count_emission_peaks",
    "correlation_time", "jsa_cw", "jsa_general", "schmidt_number",
    "schmidt_report",
    # design recipe
    "NdpPair", "ContinuumInterval", "PumpSolutionSet",
    "DesignConditionsReport", "SweepRow",
    "design_zero_dispersion_frequency", "find_k4_zero_radius",
    "find_ndp_pairs", "evaluate_conditions", "dp_ndp_symmetry_residual",
    "bandwidth_sweep",
    # interference
    "MultiLinePumpSpec", "PhaseSweep", "interference_grid", "jsa_multiline",
    "flux_vs_phase", "marginal_intensity",
]
