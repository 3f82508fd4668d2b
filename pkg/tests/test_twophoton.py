"""Two-photon state analysis: singles spectra, bandwidth structure,
joint spectral amplitudes, Schmidt number, and the time-difference width.

Closed-form oracles (rectangular band, double-Gaussian joint amplitude)
pin the numerics; frozen regression values pin the model outputs at the
production defaults.
"""

import numpy as np
import pytest

from conftest import assert_rel
from sfwm import (ConfigError, GaussianEnvelope, JointSpectrum, PumpPair,
                  RectBand, RectBandsEnvelope, ResolutionError,
                  SinglesSpectrum, TruncatedSpectrumError, bandwidth_report,
                  correlation_time, count_emission_peaks,
                  design_zero_dispersion_frequency, jsa_cw, jsa_general,
                  omega_from_lambda_um, schmidt_number, schmidt_report,
                  singles_spectrum)

GAMMA = 70.0e-3

# FWHM of (sin(W t) / t)^2: the transform of a unit rectangle of full
# width W in the singles frequency runs in the doubled difference
# variable, so tau * 2W = 4 x0 with sin(x0)/x0 = 1/sqrt(2).
RECT_TIME_WIDTH_PRODUCT = 5.566228


# ----------------------------------------------------------------------------
# oracles on synthetic spectra
# ----------------------------------------------------------------------------

def test_rect_band_correlation_time_oracle():
    center = 2.0e15
    width = 4.0e13
    omega = np.linspace(center - 1.0e14, center + 1.0e14, 8193)
    amp = np.where(np.abs(omega - center) <= 0.5 * width, 1.0 + 0.0j, 0.0)
    spec = SinglesSpectrum(omega_rad_s=omega, amplitude=amp, metadata={})
    result = correlation_time(spec, include_phase=True)
    assert_rel(result.tau_s * 2.0 * width, RECT_TIME_WIDTH_PRODUCT, 0.01,
               "rect-band time-width product")
    assert not result.truncation_warning


def _gaussian_joint_state(sigma_plus, sigma_minus, npoints=801):
    """Unit-L2 double-Gaussian joint amplitude about a 2e15 rad/s center."""
    center = 2.0e15
    span = 5.0 * max(sigma_plus, sigma_minus)
    axis = np.linspace(center - span, center + span, npoints)
    om_i, om_s = np.meshgrid(axis, axis, indexing="ij")
    plus = (om_s + om_i - 2.0 * center) / np.sqrt(2.0)
    minus = (om_s - om_i) / np.sqrt(2.0)
    amp = np.exp(-plus**2 / (4.0 * sigma_plus**2)
                 - minus**2 / (4.0 * sigma_minus**2)).astype(complex)
    d = axis[1] - axis[0]
    amp /= np.sqrt(np.sum(np.abs(amp) ** 2) * d * d)
    return JointSpectrum(omega_s_rad_s=axis, omega_i_rad_s=axis,
                         amplitude=amp, metadata={})


def test_gaussian_schmidt_number_oracle():
    sigma_plus, sigma_minus = 1.0e12, 3.0e12
    state = _gaussian_joint_state(sigma_plus, sigma_minus)
    exact = (sigma_plus**2 + sigma_minus**2) / (2.0 * sigma_plus * sigma_minus)
    assert_rel(schmidt_number(state), exact, 0.01, "double-Gaussian K")


def test_separable_state_schmidt_is_one():
    axis = np.linspace(1.9e15, 2.1e15, 401)
    line = np.exp(-((axis - 2.0e15) / 2.0e13) ** 2)
    amp = np.outer(line, line).astype(complex)
    d = axis[1] - axis[0]
    amp /= np.sqrt(np.sum(np.abs(amp) ** 2) * d * d)
    state = JointSpectrum(omega_s_rad_s=axis, omega_i_rad_s=axis,
                          amplitude=amp, metadata={})
    assert abs(schmidt_number(state) - 1.0) < 1.0e-9


# ----------------------------------------------------------------------------
# joint spectral amplitude construction
# ----------------------------------------------------------------------------

def _joint_axis(profile, rel_halfwidth=0.05, npoints=401):
    zd = design_zero_dispersion_frequency(profile)
    return zd, np.linspace(zd * (1.0 - rel_halfwidth),
                           zd * (1.0 + rel_halfwidth), npoints)


def test_jsa_cw_normalization_and_metadata(profile_intf):
    zd, axis = _joint_axis(profile_intf)
    state = jsa_cw(profile_intf, PumpPair.degenerate(zd), 0.25,
                   axis, axis.copy())
    assert state.is_normalized()
    assert state.metadata["kind"] == "cw-ridge"
    assert state.metadata["flags"] == ()
    assert state.metadata["ridge_width_rad_s"] == pytest.approx(
        4.0 * state.d_omega_s)


def test_jsa_cw_ridge_unresolved_flag(profile_intf):
    zd, axis = _joint_axis(profile_intf)
    state = jsa_cw(profile_intf, PumpPair.degenerate(zd), 0.25,
                   axis, axis.copy(), ridge_width_rad_s=0.4 * (axis[1] - axis[0]))
    assert "ridge-unresolved" in state.metadata["flags"]


def test_jsa_general_matches_cw_limit(profile_intf):
    """Narrow-pump joint amplitude versus the monochromatic rendering.

    The two constructions distribute mass differently ACROSS the
    energy-conservation line (the monochromatic kernel is pinned at the
    physical pump frequencies and collapses off the line on the
    group-delay scale 2 pi / (L k'), far below a grid cell, while finite
    pump lines let the partner frequency absorb the offset), so a full-2D
    comparison is not meaningful.  ON the line the two must agree exactly,
    and the signal marginals must stay compatible.
    """
    zd = design_zero_dispersion_frequency(profile_intf)
    axis = np.linspace(zd * 0.7, zd * 1.3, 601)
    d = axis[1] - axis[0]

    cw = jsa_cw(profile_intf, PumpPair.degenerate(zd), 0.25, axis, axis.copy())
    env = GaussianEnvelope(center_rad_s=zd, sigma_rad_s=d / np.sqrt(2.0))
    gen = jsa_general(profile_intf, env, env, 0.25, axis, axis.copy())

    idx = np.arange(axis.size)
    line_cw = np.abs(cw.amplitude[idx[::-1], idx])
    line_gen = np.abs(gen.amplitude[idx[::-1], idx])
    line_cw /= line_cw.max()
    line_gen /= line_gen.max()
    assert np.max(np.abs(line_cw - line_gen)) < 1.0e-6

    marg_cw = (np.abs(cw.amplitude) ** 2).sum(axis=0) * cw.d_omega_i
    marg_gen = (np.abs(gen.amplitude) ** 2).sum(axis=0) * gen.d_omega_i
    rel_l2 = (np.sqrt(np.sum((marg_cw - marg_gen) ** 2))
              / np.sqrt(np.sum(marg_cw**2)))
    assert rel_l2 < 0.1, f"marginal shapes diverged: rel L2 {rel_l2:.3e}"


def test_jsa_general_envelope_swap_bitwise(profile_intf):
    zd, axis = _joint_axis(profile_intf, npoints=201)
    env1 = GaussianEnvelope(center_rad_s=zd * 0.995, sigma_rad_s=2.0e12)
    env2 = RectBandsEnvelope((RectBand(zd * 1.005, 4.0e12),))
    a = jsa_general(profile_intf, env1, env2, 0.25, axis, axis.copy(),
                    power1_w=3.0, power2_w=7.0, gamma1_w_m=GAMMA,
                    gamma2_w_m=GAMMA)
    b = jsa_general(profile_intf, env2, env1, 0.25, axis, axis.copy(),
                    power1_w=7.0, power2_w=3.0, gamma1_w_m=GAMMA,
                    gamma2_w_m=GAMMA)
    assert np.array_equal(a.amplitude, b.amplitude)


def test_jsa_general_resolution_guards(profile_intf):
    zd, axis = _joint_axis(profile_intf, npoints=101)
    env = GaussianEnvelope(center_rad_s=zd, sigma_rad_s=2.0e12)
    with pytest.raises(ResolutionError):
        jsa_general(profile_intf, env, env, 0.25, axis, axis.copy(),
                    nodes_per_band=4)
    wide = GaussianEnvelope(center_rad_s=zd, sigma_rad_s=2.0e14)
    narrow = RectBandsEnvelope((RectBand(zd, 1.0e12),))
    with pytest.raises(ResolutionError):
        jsa_general(profile_intf, wide, narrow, 0.25, axis, axis.copy(),
                    nodes_per_band=32)


def test_schmidt_growth_and_lower_bound_caveat(profile_intf):
    zd = design_zero_dispersion_frequency(profile_intf)
    pump = PumpPair.degenerate(zd)
    values = []
    for npoints in (256, 512):
        axis = np.linspace(zd * 0.95, zd * 1.05, npoints)
        state = jsa_cw(profile_intf, pump, 0.25, axis, axis.copy())
        values.append(schmidt_number(state))
    assert values[1] > values[0], (
        "monochromatic-ridge Schmidt number must grow under refinement")

    axis = np.linspace(zd * 0.95, zd * 1.05, 256)
    narrow = jsa_cw(profile_intf, pump, 0.25, axis, axis.copy(),
                    ridge_width_rad_s=2.0 * (axis[1] - axis[0]))
    report = schmidt_report(narrow)
    assert report.lower_bound_only
    assert report.caveat


# ----------------------------------------------------------------------------
# singles spectra: bandwidth structure at the production defaults
# ----------------------------------------------------------------------------

def test_bandwidth_report_fiber_a(state_a):
    _, report = state_a
    assert_rel(report.flat_fwhm_nm, 720.2, 1.0e-3, "A flat width [nm]")
    assert_rel(report.fractional_bandwidth, 0.5511, 1.0e-3, "A fractional")
    assert report.satellite_pairs, "outer satellites expected for fiber A"
    assert_rel(report.outer_satellite_width_nm, 2883.9, 1.0e-3,
               "A outer satellite width [nm]")


def test_bandwidth_report_fiber_b(state_b):
    _, report = state_b
    assert_rel(report.flat_fwhm_nm, 1150.5, 1.0e-3, "B flat width [nm]")


def test_bandwidth_report_fiber_c(state_c):
    _, report = state_c
    assert_rel(report.flat_fwhm_nm, 621.6, 1.0e-3, "C flat width [nm]")
    assert len(report.satellite_pairs) >= 2, "C shows two satellite pairs"
    widths = [p.outer_width_nm for p in report.satellite_pairs]
    assert_rel(widths[0], 1337.6, 1.0e-3, "C inner satellite width [nm]")
    assert_rel(widths[-1], 2491.8, 1.0e-3, "C outer satellite width [nm]")


def test_bandwidth_report_requires_zd():
    omega = np.linspace(1.0e15, 2.0e15, 101)
    amp = np.exp(-((omega - 1.5e15) / 5.0e13) ** 2).astype(complex)
    spec = SinglesSpectrum(omega_rad_s=omega, amplitude=amp, metadata={})
    with pytest.raises(ConfigError):
        bandwidth_report(spec)


def test_truncated_spectrum_raises(profile_a):
    zd = design_zero_dispersion_frequency(profile_a)
    pump = PumpPair(zd, zd, power1_w=5.0, power2_w=5.0,
                    gamma1_w_m=GAMMA, gamma2_w_m=GAMMA)
    narrow = np.linspace(zd * 0.95, zd * 1.05, 2001)
    spec = singles_spectrum(profile_a, pump, length_m=0.25,
                            omega_rad_s=narrow)
    with pytest.raises(TruncatedSpectrumError):
        bandwidth_report(spec)


# ----------------------------------------------------------------------------
# emission peak counting (low-power narrow-core example)
# ----------------------------------------------------------------------------

def test_peak_count_degenerate_three(profile_fig1):
    pump = PumpPair.degenerate(omega_from_lambda_um(0.62))
    spec = singles_spectrum(profile_fig1, pump, length_m=0.01)
    assert count_emission_peaks(spec, lambda_window_um=(0.40, 1.40)) == 3


def test_peak_count_nondegenerate_four(profile_fig1):
    pump = PumpPair(omega_from_lambda_um(0.54), omega_from_lambda_um(0.70))
    spec = singles_spectrum(profile_fig1, pump, length_m=0.01)
    assert count_emission_peaks(spec, lambda_window_um=(0.40, 1.40)) == 4


# ----------------------------------------------------------------------------
# correlation time at the production defaults
# ----------------------------------------------------------------------------

def _flat_window_tau(state):
    spectrum, report = state
    result = correlation_time(spectrum, include_phase=True,
                              omega_window_rad_s=report.flat_interval_rad_s)
    return result, report


def test_correlation_time_fiber_a(state_a):
    result, _ = _flat_window_tau(state_a)
    assert_rel(result.tau_s, 3.415e-15, 5.0e-3, "A time-difference width")


def test_correlation_time_fiber_b(state_b):
    result, _ = _flat_window_tau(state_b)
    assert_rel(result.tau_s, 2.495e-15, 5.0e-3, "B time-difference width")


def test_correlation_time_fiber_c(state_c):
    result, _ = _flat_window_tau(state_c)
    assert_rel(result.tau_s, 3.947e-15, 5.0e-3, "C time-difference width")


@pytest.mark.parametrize("which", ["a", "b", "c"])
def test_time_bandwidth_product(which, request):
    state = request.getfixturevalue(f"state_{which}")
    result, report = _flat_window_tau(state)
    product = result.tau_s * report.flat_fwhm_rad_s
    assert 2.5 < product < 8.0, (
        f"time-bandwidth product {product:.3f} out of the transform-limited "
        "range for a near-rectangular band")
