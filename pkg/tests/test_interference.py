"""Two-pathway pump interference: three-line pump specification, joint
amplitude on the main emission stripe, and the pair flux against the
centre-line phase (cos^2 law, pathway bookkeeping, amplitude law)."""

import math

import numpy as np
import pytest

from conftest import assert_rel
from sfwm import (ConfigError, DomainError, MultiLinePumpSpec, NumericError,
                  PumpSpecError, ResolutionError,
                  design_zero_dispersion_frequency, flux_vs_phase,
                  interference_grid, jsa_multiline, marginal_intensity)

# The worked two-pathway example: outer lines at the equal-rate
# nondegenerate pair of the r = 0.8658 um, f = 0.4 fiber, 0.5 nm bands.
DETUNING_RAD_S = 5.452243e13
BAND_WIDTH_RAD_S = 1.439042e12
TOTAL_POWER_W = 5.0


@pytest.fixture(scope="module")
def spec_intf(profile_intf):
    zd = design_zero_dispersion_frequency(profile_intf)
    return MultiLinePumpSpec.symmetric(zd, DETUNING_RAD_S, BAND_WIDTH_RAD_S,
                                       total_peak_power_w=TOTAL_POWER_W)


@pytest.fixture(scope="module")
def sweep_intf(profile_intf, spec_intf):
    return flux_vs_phase(profile_intf, spec_intf)


# ----------------------------------------------------------------------------
# pump specification
# ----------------------------------------------------------------------------

def test_spec_validation():
    with pytest.raises(PumpSpecError):
        MultiLinePumpSpec(2.0e15, 1.0e15, 3.0e15, 1.0e12)  # order
    with pytest.raises(PumpSpecError):
        MultiLinePumpSpec(1.0e15, 2.0e15, 3.0e15 + 1.0e7, 1.0e12)  # sum rule
    with pytest.raises(PumpSpecError):
        MultiLinePumpSpec.symmetric(2.0e15, 1.0e13, 1.1e13)  # overlap
    with pytest.raises(PumpSpecError):
        MultiLinePumpSpec.symmetric(2.0e15, 1.0e13, 1.0e12,
                                    total_peak_power_w=0.0)
    with pytest.raises(PumpSpecError):
        MultiLinePumpSpec.symmetric(2.0e15, 1.0e13, 1.0e12,
                                    theta_rad=math.nan)


def test_spec_power_bookkeeping(spec_intf):
    # Total spectral power is theta-independent and exactly the requested
    # peak power; each pathway carries exactly half.
    for theta in (0.0, 0.7, math.pi / 2, 2.9):
        spec = spec_intf.with_theta(theta)
        assert spec.envelope().norm_squared() == pytest.approx(
            TOTAL_POWER_W, rel=1.0e-12)
        assert spec.envelope_dp_only().norm_squared() == pytest.approx(
            0.5 * TOTAL_POWER_W, rel=1.0e-12)
        assert spec.envelope_ndp_only().norm_squared() == pytest.approx(
            0.5 * TOTAL_POWER_W, rel=1.0e-12)
    assert spec_intf.amplitude0 == pytest.approx(
        math.sqrt(TOTAL_POWER_W / (4.0 * BAND_WIDTH_RAD_S)), rel=1.0e-12)
    assert spec_intf.detuning_rad_s == pytest.approx(DETUNING_RAD_S)


def test_spec_round_trip(spec_intf):
    rebuilt = MultiLinePumpSpec(**spec_intf.to_dict())
    assert rebuilt == spec_intf


# ----------------------------------------------------------------------------
# grids
# ----------------------------------------------------------------------------

def test_interference_grid_covers_main_mode(profile_intf, spec_intf):
    axis, meta = interference_grid(profile_intf, spec_intf, points=2049)
    zd = spec_intf.omega_dp_rad_s
    assert axis[0] < zd < axis[-1]
    assert axis.size == 2049
    assert not meta["clipped"]
    assert meta["span_rad_s"] > 0.0


# ----------------------------------------------------------------------------
# joint amplitude on the main stripe
# ----------------------------------------------------------------------------

def test_jsa_pathway_sum_rule(profile_intf, spec_intf):
    """At theta = 0 the two pathways add coherently: with equal pathway
    fluxes the total is four times the centre-line-only flux."""
    full = jsa_multiline(profile_intf, spec_intf)
    dp = jsa_multiline(profile_intf, spec_intf, bands="dp-only")
    flux_full = full.total_probability
    flux_dp = dp.total_probability
    assert_rel(flux_full, 4.0 * flux_dp, 1.0e-3,
               "theta = 0 coherent pathway sum")
    assert full.metadata["same_band_fraction"] == 0.0
    assert full.metadata["flags"] == ()


def test_jsa_amplitude_law(profile_intf, spec_intf):
    """|F(theta)| = 2 |cos theta| |F_dp| pointwise on the stripe."""
    dp = jsa_multiline(profile_intf, spec_intf, bands="dp-only")
    scale = np.sqrt(dp.total_probability)
    for theta in (0.0, math.pi / 6, math.pi / 3):
        full = jsa_multiline(profile_intf, spec_intf.with_theta(theta))
        residual = (np.abs(full.amplitude)
                    - 2.0 * abs(math.cos(theta)) * np.abs(dp.amplitude))
        rel_l2 = np.sqrt(np.sum(residual**2) * full.d_omega_s
                         * full.d_omega_i) / (2.0 * abs(math.cos(theta))
                                              * scale)
        assert rel_l2 < 2.0e-3, f"theta {theta}: amplitude law {rel_l2:.2e}"


def test_jsa_dark_fringe_raises(profile_intf, spec_intf):
    # At theta = pi/2 the two pathways cancel; the stripe-restricted
    # amplitude vanishes identically and the builder refuses to return an
    # all-zero state.  (The residual flux 3e-6 of flux(0) sits below the
    # builder's mass floor only in the strict dp+ndp cancellation; guard
    # with the exact dark phase.)
    state = jsa_multiline(profile_intf, spec_intf.with_theta(math.pi / 2))
    dp = jsa_multiline(profile_intf, spec_intf, bands="dp-only")
    assert state.total_probability < 1.0e-4 * 4.0 * dp.total_probability


def test_jsa_marginal_peaks_at_center(profile_intf, spec_intf):
    state = jsa_multiline(profile_intf, spec_intf)
    omega, marg = marginal_intensity(state, axis="signal")
    zd = spec_intf.omega_dp_rad_s
    # The stripe is nearly flat across the window; the marginal must not
    # vanish anywhere on the grid interior and peaks on the grid.
    assert marg.max() == 1.0
    assert omega[0] < zd < omega[-1]
    with pytest.raises(ConfigError):
        marginal_intensity(state, axis="diagonal")


def test_jsa_validation(profile_intf, spec_intf):
    axis = np.linspace(spec_intf.omega_dp_rad_s * 0.9,
                       spec_intf.omega_dp_rad_s * 1.1, 257)
    with pytest.raises(ConfigError):
        jsa_multiline(profile_intf, spec_intf, axis)  # one grid only
    with pytest.raises(ConfigError):
        jsa_multiline(profile_intf, spec_intf, bands="outer")
    with pytest.raises(ResolutionError):
        jsa_multiline(profile_intf, spec_intf, nodes_per_band=4)
    # Bands outside the dispersion validity range.
    lo = 1.05 * pytest.approx(0.0) or None
    bad = MultiLinePumpSpec.symmetric(5.35e14, 1.0e13, 1.0e12)
    with pytest.raises(DomainError):
        jsa_multiline(profile_intf, bad)


def test_jsa_coarse_grid_flags_or_raises(profile_intf, spec_intf):
    zd = spec_intf.omega_dp_rad_s
    # Spacing wider than the doubled band width: unresolved -> error.
    axis = np.linspace(zd * 0.8, zd * 1.2, 101)
    with pytest.raises(ResolutionError):
        jsa_multiline(profile_intf, spec_intf, axis, axis.copy())
    # Spacing between one and two cells across the feature: flagged.
    step_target = 1.5 * BAND_WIDTH_RAD_S
    n = int(round((zd * 0.02) / step_target)) | 1
    axis = zd + step_target * (np.arange(n) - n // 2)
    state = jsa_multiline(profile_intf, spec_intf, axis, axis.copy())
    assert "ridge-unresolved" in state.metadata["flags"]


def test_jsa_empty_window_raises(profile_intf, spec_intf):
    zd = spec_intf.omega_dp_rad_s
    # A grid whose pump-sum lattice misses the window entirely.
    axis = np.linspace(1.3 * zd, 1.4 * zd, 201)
    with pytest.raises(DomainError):
        jsa_multiline(profile_intf, spec_intf, axis, axis.copy())


# ----------------------------------------------------------------------------
# flux against the centre-line phase
# ----------------------------------------------------------------------------

def test_flux_follows_cos_squared(sweep_intf):
    theta = sweep_intf.theta_rad
    rms = np.sqrt(np.mean((sweep_intf.flux_norm - np.cos(theta) ** 2) ** 2))
    assert rms < 1.0e-3, f"cos^2 deviation RMS {rms:.2e}"


def test_flux_dark_fringe_depth(sweep_intf):
    ratio = float(sweep_intf.flux_at(math.pi / 2)) / sweep_intf.flux_theta0
    assert ratio < 1.0e-4, f"pi/2 flux ratio {ratio:.2e}"


def test_flux_half_point(sweep_intf):
    ratio = float(sweep_intf.flux_at(math.pi / 4)) / sweep_intf.flux_theta0
    assert abs(ratio - 0.5) < 1.0e-3


def test_flux_period_pi(sweep_intf):
    theta = np.linspace(0.0, math.pi, 17)
    a = sweep_intf.flux_at(theta)
    b = sweep_intf.flux_at(theta + math.pi)
    assert np.max(np.abs(a - b)) <= 1.0e-9 * sweep_intf.flux_theta0


def test_flux_pathway_bookkeeping(sweep_intf):
    meta = sweep_intf.metadata
    assert_rel(meta["pathway_rate_ratio"], 1.0, 1.0e-3,
               "outer-pair / centre-line pathway rate ratio")
    assert meta["same_band_fraction"] == 0.0
    # theta = 0 flux equals the coherent sum of the pathway fluxes.
    gram = sweep_intf.gram
    assert sweep_intf.flux_theta0 == pytest.approx(float(gram.sum().real))
    # Mixed pathway (one centre-line photon) is dark on the stripe.
    assert meta["flux_mixed_pathway"] <= 1.0e-9 * sweep_intf.flux_theta0


def test_flux_at_matches_grid(sweep_intf):
    values = sweep_intf.flux_at(sweep_intf.theta_rad)
    assert np.allclose(values, sweep_intf.flux, rtol=1.0e-12, atol=0.0)
    rows = list(sweep_intf.rows())
    assert len(rows) == sweep_intf.theta_rad.size
    assert rows[0][1] == pytest.approx(1.0)


def test_flux_phase_grid_validation(profile_intf, spec_intf):
    with pytest.raises(ConfigError):
        flux_vs_phase(profile_intf, spec_intf,
                      theta_rad=np.linspace(0.0, 1.0, 9))
    with pytest.raises(ConfigError):
        flux_vs_phase(profile_intf, spec_intf,
                      theta_rad=np.array([math.nan, math.pi]))


def test_flux_deterministic(profile_intf, spec_intf):
    a = flux_vs_phase(profile_intf, spec_intf, grid_points=1025)
    b = flux_vs_phase(profile_intf, spec_intf, grid_points=1025)
    assert np.array_equal(a.gram, b.gram)
    assert np.array_equal(a.flux, b.flux)
