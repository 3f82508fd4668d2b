"""Guided-mode solver: eigenvalue limits, index bounds, vectorization."""

import numpy as np
import pytest

from sfwm import DomainError, FiberGeometry, effective_index
from sfwm.modesolver import (J0_FIRST_ZERO, J1_FIRST_ZERO,
                             he11_transverse_eigenvalue)
from sfwm.sellmeier import FUSED_SILICA, cladding_index, lambda_um_from_omega


def test_geometry_validation():
    with pytest.raises(DomainError):
        FiberGeometry(core_radius_um=-1.0, air_fill_fraction=0.5)
    with pytest.raises(DomainError):
        FiberGeometry(core_radius_um=1.0, air_fill_fraction=0.05)
    with pytest.raises(DomainError):
        FiberGeometry(core_radius_um=1.0, air_fill_fraction=0.95)


def test_eigenvalue_interval():
    V = np.array([0.8, 1.5, 3.0, 8.0, 40.0])
    s = np.full(V.shape, 0.8)
    u = he11_transverse_eigenvalue(V, s)
    assert np.all(u > 0.0)
    assert np.all(u < np.minimum(V, J1_FIRST_ZERO))


def test_eigenvalue_large_v_limit():
    # Far from cutoff the fundamental mode's transverse eigenvalue
    # approaches the first zero of J0.
    u = he11_transverse_eigenvalue(np.array([200.0]), np.array([0.7]))
    assert abs(float(u[0]) - J0_FIRST_ZERO) < 0.05


def test_effective_index_between_cladding_and_core():
    geometry = FiberGeometry(1.8162, 0.1)
    for lam in (0.6, 1.0, 1.6, 2.4):
        omega = 2.0 * np.pi * 299792458.0 / (lam * 1.0e-6)
        n_eff = float(effective_index(geometry, omega))
        n_core = float(FUSED_SILICA.index(lam))
        n_clad = float(cladding_index(0.1, lam))
        assert n_clad < n_eff < n_core, (lam, n_clad, n_eff, n_core)


def test_effective_index_vectorized_matches_scalar():
    geometry = FiberGeometry(0.8658, 0.4)
    omega = np.linspace(1.0e15, 3.0e15, 7)
    vec = np.asarray(effective_index(geometry, omega))
    scalar = np.array([float(effective_index(geometry, w)) for w in omega])
    assert np.array_equal(vec, scalar)


def test_effective_index_monotone_on_window():
    # Higher frequency confines the mode more strongly; n_eff grows.
    geometry = FiberGeometry(0.7, 0.9)
    omega = np.linspace(6.0e14, 8.0e15, 24)
    n_eff = np.asarray(effective_index(geometry, omega))
    assert np.all(np.diff(n_eff) > 0.0)
