"""Shared fixtures: dispersion profiles and singles spectra are expensive
(seconds each), so they are built once per session and reused everywhere."""

from __future__ import annotations

import numpy as np
import pytest

from sfwm import (PumpPair, bandwidth_report, build_profile_um,
                  design_zero_dispersion_frequency, singles_spectrum)

# Reference fiber geometries (core radius [um], air-fill fraction) used
# throughout the suite.  A/B/C are the three f = 0.1 design points discussed
# in the docs; FIG1 is the narrow-core high-fill example with two
# zero-dispersion frequencies; INTF is the two-pathway interference example;
# F05A / F05B bracket the quartic-dispersion zero at f = 0.5.
GEOM_A = (1.8162, 0.1)
GEOM_B = (1.8402, 0.1)
GEOM_C = (1.8471, 0.1)
GEOM_FIG1 = (0.7, 0.9)
GEOM_INTF = (0.8658, 0.4)
GEOM_F05A = (0.9023, 0.5)
GEOM_F05B = (0.5953, 0.5)


def assert_rel(value: float, target: float, tol: float, label: str = ""):
    """Assert |value/target - 1| <= tol with a readable message."""
    dev = abs(value / target - 1.0)
    assert dev <= tol, (f"{label or 'value'} = {value:.6g} vs target "
                        f"{target:.6g}: relative deviation {dev:.3e} "
                        f"exceeds {tol:.1e}")


@pytest.fixture(scope="session")
def profile_a():
    return build_profile_um(*GEOM_A)


@pytest.fixture(scope="session")
def profile_b():
    return build_profile_um(*GEOM_B)


@pytest.fixture(scope="session")
def profile_c():
    return build_profile_um(*GEOM_C)


@pytest.fixture(scope="session")
def profile_fig1():
    return build_profile_um(*GEOM_FIG1)


@pytest.fixture(scope="session")
def profile_intf():
    return build_profile_um(*GEOM_INTF)


@pytest.fixture(scope="session")
def profile_f05a():
    return build_profile_um(*GEOM_F05A)


@pytest.fixture(scope="session")
def profile_f05b():
    return build_profile_um(*GEOM_F05B)


def _production_state(profile):
    """Singles spectrum + bandwidth report at the production defaults
    (L = 0.25 m, 5 W per pump line at the zero-dispersion frequency)."""
    omega_zd = design_zero_dispersion_frequency(profile)
    pump = PumpPair(omega_zd, omega_zd, power1_w=5.0, power2_w=5.0,
                    gamma1_w_m=70.0e-3, gamma2_w_m=70.0e-3)
    spectrum = singles_spectrum(profile, pump, length_m=0.25)
    return spectrum, bandwidth_report(spectrum)


@pytest.fixture(scope="session")
def state_a(profile_a):
    return _production_state(profile_a)


@pytest.fixture(scope="session")
def state_b(profile_b):
    return _production_state(profile_b)


@pytest.fixture(scope="session")
def state_c(profile_c):
    return _production_state(profile_c)
