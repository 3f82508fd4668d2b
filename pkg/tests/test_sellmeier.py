"""Material-index model: value anchors, validity window, serialization."""

import numpy as np
import pytest

from sfwm import ConfigError, ValidityWindowError
from sfwm.sellmeier import (FUSED_SILICA, SellmeierModel, cladding_index,
                            lambda_um_from_omega, omega_from_lambda_um,
                            silica_index)

from conftest import assert_rel


def test_silica_index_sodium_d_line():
    # Classic anchor value for the three-term fused-silica fit.
    assert_rel(float(silica_index(0.5893)), 1.458403, 1.0e-3, "n(589.3 nm)")


def test_silica_index_monotone_normal_dispersion_visible():
    lam = np.linspace(0.4, 1.2, 33)
    n = silica_index(lam)
    assert np.all(np.diff(n) < 0.0), "index must fall with wavelength here"


def test_validity_window_enforced():
    with pytest.raises(ValidityWindowError):
        silica_index(0.15)
    with pytest.raises(ValidityWindowError):
        silica_index(4.0)
    with pytest.raises(ValidityWindowError):
        omega_from_lambda_um(-1.0)


def test_wavelength_frequency_round_trip():
    lam = np.array([0.25, 0.62, 1.2076, 3.5])
    back = lambda_um_from_omega(omega_from_lambda_um(lam))
    assert np.allclose(back, lam, rtol=1e-15, atol=0.0)


def test_cladding_index_limits_and_interpolation():
    lam = 0.8
    n_glass = float(silica_index(lam))
    assert float(cladding_index(0.0, lam)) == pytest.approx(n_glass,
                                                            rel=1e-15)
    assert float(cladding_index(1.0, lam)) == 1.0
    n_half = float(cladding_index(0.5, lam))
    assert n_half == pytest.approx(0.5 * (1.0 + n_glass), rel=1e-15)


def test_model_serialization_round_trip():
    clone = SellmeierModel.from_dict(FUSED_SILICA.to_dict())
    assert clone == FUSED_SILICA


def test_model_rejects_malformed_coefficients():
    with pytest.raises(ConfigError):
        SellmeierModel.from_dict({"b": [1.0], "c_um2": []})
    with pytest.raises(ConfigError):
        SellmeierModel(b=(0.5,), c_um2=(0.1,), lambda_min_um=2.0,
                       lambda_max_um=1.0)


def test_omega_window_bounds_consistent():
    assert FUSED_SILICA.omega_min_rad_s == pytest.approx(
        float(omega_from_lambda_um(FUSED_SILICA.lambda_max_um)), rel=1e-15)
    assert FUSED_SILICA.omega_max_rad_s == pytest.approx(
        float(omega_from_lambda_um(FUSED_SILICA.lambda_min_um)), rel=1e-15)
