"""Design searches: quartic-dispersion-zero radius, nondegenerate pump
solutions, flat-emission condition evaluation, and the bandwidth sweep."""

import numpy as np
import pytest

from conftest import GEOM_A, GEOM_F05A, GEOM_F05B, assert_rel
from sfwm import (ConfigError, DomainError, PumpPair, bandwidth_sweep,
                  build_profile_um, design_zero_dispersion_frequency,
                  dp_ndp_symmetry_residual, evaluate_conditions,
                  find_k4_zero_radius, find_ndp_pairs)
from sfwm.design import DEFAULT_PHASEMATCH_TOL_1_M

GAMMA = 70.0e-3


# ----------------------------------------------------------------------------
# quartic-dispersion-zero radius search
# ----------------------------------------------------------------------------

def test_k4_zero_radius_high_fill():
    radius = find_k4_zero_radius(0.5, (GEOM_F05B[0], GEOM_F05A[0]))
    assert_rel(radius, 0.7066, 1.0e-3, "f = 0.5 quartic-zero radius [um]")


def test_k4_zero_radius_low_fill():
    radius = find_k4_zero_radius(0.1, (1.7, 2.1))
    assert_rel(radius, 1.8140, 1.0e-3, "f = 0.1 quartic-zero radius [um]")


def test_k4_radius_bad_bracket_raises():
    with pytest.raises(ConfigError):
        find_k4_zero_radius(0.5, (0.62, 0.65))  # no sign change
    with pytest.raises(ConfigError):
        find_k4_zero_radius(0.5, (0.7, 0.7))


# ----------------------------------------------------------------------------
# nondegenerate pump solutions
# ----------------------------------------------------------------------------

def test_ndp_pairs_fiber_a_zero_power(profile_a):
    solutions = find_ndp_pairs(profile_a)
    assert solutions.power_term_1_m == 0.0
    assert len(solutions.discrete_pairs) == 1
    pair = solutions.discrete_pairs[0]
    assert_rel(pair.lambda_short_um, 0.7253, 1.0e-3, "A pair short [um]")
    assert_rel(pair.lambda_long_um, 3.6059, 1.0e-3, "A pair long [um]")
    assert pair.residual_1_m <= DEFAULT_PHASEMATCH_TOL_1_M

    continuum = solutions.continuum
    assert continuum is not None and not continuum.truncated
    assert_rel(continuum.lambda_short_um, 1.1797, 1.0e-3,
               "A continuum short edge [um]")
    assert_rel(continuum.lambda_long_um, 1.2370, 1.0e-3,
               "A continuum long edge [um]")


def test_ndp_pairs_fiber_b_at_power(profile_b):
    solutions = find_ndp_pairs(profile_b, power1_w=5.0, power2_w=5.0,
                               gamma1_w_m=GAMMA, gamma2_w_m=GAMMA)
    assert solutions.power_term_1_m == pytest.approx(2.0 * GAMMA * 5.0)
    assert len(solutions.discrete_pairs) == 2
    inner, outer = solutions.discrete_pairs
    assert_rel(inner.lambda_short_um, 0.8656, 1.0e-3, "B inner short [um]")
    assert_rel(inner.lambda_long_um, 1.9488, 1.0e-3, "B inner long [um]")
    assert_rel(outer.lambda_short_um, 0.7308, 1.0e-3, "B outer short [um]")
    assert_rel(outer.lambda_long_um, 3.3344, 1.0e-3, "B outer long [um]")
    for pair in solutions.discrete_pairs:
        assert pair.residual_1_m <= DEFAULT_PHASEMATCH_TOL_1_M


def test_ndp_continuum_interference_fiber(profile_intf):
    solutions = find_ndp_pairs(profile_intf)
    continuum = solutions.continuum
    assert continuum is not None
    assert_rel(continuum.lambda_short_um, 0.7868, 5.0e-3,
               "two-pathway fiber continuum short edge [um]")
    assert_rel(continuum.lambda_long_um, 0.8323, 5.0e-3,
               "two-pathway fiber continuum long edge [um]")


def test_ndp_window_restriction(profile_a):
    zd = design_zero_dispersion_frequency(profile_a)
    # Window covering only the high-frequency member still finds the pair.
    full = find_ndp_pairs(profile_a)
    windowed = find_ndp_pairs(profile_a,
                              omega_window_rad_s=(1.05 * zd, 2.0 * zd))
    assert len(windowed.discrete_pairs) == 1
    assert windowed.discrete_pairs[0].omega_high_rad_s == pytest.approx(
        full.discrete_pairs[0].omega_high_rad_s, rel=1.0e-9)
    # A window that misses the validity region entirely is a domain error.
    with pytest.raises(DomainError):
        find_ndp_pairs(profile_a,
                       omega_window_rad_s=(zd * 1.0e-3, zd * 2.0e-3))


# ----------------------------------------------------------------------------
# degenerate / nondegenerate equivalence
# ----------------------------------------------------------------------------

def test_dp_ndp_symmetry_residual_random_pairs(profile_a):
    zd = design_zero_dispersion_frequency(profile_a)
    omega = np.linspace(0.6 * zd, 1.4 * zd, 2001)
    k_scale = abs(float(profile_a.k(zd)))
    rng = np.random.default_rng(20260815)
    for detuning in rng.uniform(0.01, 0.35, size=5) * zd:
        residual = dp_ndp_symmetry_residual(profile_a, omega,
                                            zd + detuning, zd - detuning,
                                            power_term_1_m=0.35)
        assert residual <= 1.0e-9 * k_scale, (
            f"detuning {detuning:.3e}: residual {residual:.3e}")


def test_dp_ndp_symmetry_requires_symmetric_pair(profile_a):
    zd = design_zero_dispersion_frequency(profile_a)
    omega = np.linspace(0.9 * zd, 1.1 * zd, 101)
    with pytest.raises(ConfigError):
        dp_ndp_symmetry_residual(profile_a, omega, 1.2 * zd, 0.9 * zd)


# ----------------------------------------------------------------------------
# flat-emission conditions
# ----------------------------------------------------------------------------

def test_conditions_all_pass_at_design_point(profile_a):
    zd = design_zero_dispersion_frequency(profile_a)
    report = evaluate_conditions(profile_a, zd, zd, PumpPair.degenerate(zd))
    assert report.phasematch_pass
    assert report.energy_pass
    assert report.slope_pass and report.contour_slope == 0.0
    assert report.curvature_pass
    assert report.all_pass
    assert report.flags == ()


def test_conditions_curvature_fails_off_design():
    profile = build_profile_um(*GEOM_F05A)
    zd = design_zero_dispersion_frequency(profile)
    report = evaluate_conditions(profile, zd, zd, PumpPair.degenerate(zd))
    assert report.phasematch_pass
    assert report.energy_pass
    assert report.slope_pass
    assert not report.curvature_pass, (
        "the visibly-curved reference geometry must fail condition iv")
    assert not report.all_pass


def test_conditions_detect_unmatched_candidate(profile_a):
    zd = design_zero_dispersion_frequency(profile_a)
    # A candidate far off the contour: condition i fails by a wide margin.
    report = evaluate_conditions(profile_a, 1.35 * zd, 0.65 * zd,
                                 PumpPair.degenerate(zd))
    assert not report.phasematch_pass
    assert report.energy_pass


# ----------------------------------------------------------------------------
# bandwidth sweep
# ----------------------------------------------------------------------------

def test_bandwidth_sweep_peak_and_thread_determinism():
    radii = [GEOM_A[0], 1.8402, 1.8471, 1.90]
    kwargs = dict(power_w=5.0, gamma_w_m=GAMMA, length_m=0.25,
                  npoints=40001)
    rows_serial = bandwidth_sweep(0.1, radii, threads=1, **kwargs)
    rows_parallel = bandwidth_sweep(0.1, radii, threads=4, **kwargs)
    assert rows_serial == rows_parallel, (
        "sweep rows must not depend on the thread count")

    assert [row.r_um for row in rows_serial] == radii
    widths = {row.r_um: row.fwhm_main_nm for row in rows_serial
              if row.fwhm_main_nm is not None}
    assert widths, "at least some radii must yield a measurable flat region"
    best = max(widths, key=widths.get)
    assert best == pytest.approx(1.8402), (
        f"flat emission width should peak at 1.8402 um, got {best} "
        f"(widths {widths})")


def test_bandwidth_sweep_flags_unusable_radius():
    rows = bandwidth_sweep(0.1, [0.4], npoints=20001)
    assert len(rows) == 1
    assert rows[0].fwhm_main_nm is None
    assert rows[0].flags, "an unusable radius must carry an explanatory flag"


def test_bandwidth_sweep_validation():
    with pytest.raises(ConfigError):
        bandwidth_sweep(0.1, [])
    with pytest.raises(ConfigError):
        bandwidth_sweep(0.1, [1.8], threads=0)
