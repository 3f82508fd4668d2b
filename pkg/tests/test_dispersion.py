"""Dispersion profiles: zero-dispersion roots, derivative cross-checks,
validity behavior, determinism."""

import numpy as np
import pytest

from sfwm import DomainError, build_profile_um, lambda_um_from_omega

from conftest import assert_rel


def test_zero_dispersion_roots_fig1(profile_fig1):
    # This narrow-core, high-fill geometry has two k'' roots; values frozen
    # from the validated model (regression guard, tighter than the design
    # tolerance).
    lams = sorted(lambda_um_from_omega(w)
                  for w in profile_fig1.zero_dispersion_frequencies())
    assert len(lams) == 2
    assert_rel(lams[0], 0.6334974, 1.0e-4, "short zd wavelength")
    assert_rel(lams[1], 1.6526963, 1.0e-4, "long zd wavelength")


def test_zero_dispersion_root_unique_a(profile_a):
    roots = profile_a.zero_dispersion_frequencies()
    lams = [float(lambda_um_from_omega(w)) for w in roots]
    assert any(abs(l / 1.2076 - 1.0) < 0.015 for l in lams)
    # k'' changes sign across each reported root.
    for root in roots:
        h = 2.0e-3 * root
        left = profile_a.k_derivative(root - h, 2)
        right = profile_a.k_derivative(root + h, 2)
        assert np.sign(left) != np.sign(right)


def test_derivatives_cross_checked_with_finite_differences(profile_a):
    # Independent centered finite-difference oracle on the cached curve.
    # Probes sit away from the k'' root (1.56e15 rad/s) where a relative
    # comparison is meaningful.
    for omega in (1.1e15, 1.8e15, 2.4e15):
        for order in (1, 2, 3):
            fit = profile_a.k_derivative(omega, order)
            fd = profile_a.k_derivative_fd(omega, order)
            assert_rel(fd, fit, 1.0e-5, f"d^{order}k at {omega:.3g}")


def test_validity_window(profile_a):
    below = profile_a.omega_min * 0.99
    above = profile_a.omega_max * 1.01
    with pytest.raises(DomainError):
        profile_a.k(below)
    with pytest.raises(DomainError):
        profile_a.k(above)
    assert np.isnan(profile_a.k_or_nan(below))
    assert np.isnan(profile_a.k_or_nan(above))
    inside = 0.5 * (profile_a.omega_min + profile_a.omega_max)
    assert np.isfinite(profile_a.k_or_nan(inside))


def test_profile_build_deterministic():
    p1 = build_profile_um(0.8658, 0.4)
    p2 = build_profile_um(0.8658, 0.4)
    omega = np.linspace(p1.omega_min * 1.01, p1.omega_max * 0.99, 101)
    assert np.array_equal(p1.k(omega), p2.k(omega))


def test_k_positive_and_increasing(profile_intf):
    omega = np.linspace(profile_intf.omega_min * 1.001,
                        profile_intf.omega_max * 0.999, 257)
    k = profile_intf.k(omega)
    assert np.all(k > 0.0)
    assert np.all(np.diff(k) > 0.0)
