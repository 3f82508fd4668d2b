"""Material refractive index: Sellmeier model for the glass background.

The default coefficient set is the standard three-term fit for fused silica
(Malitson), valid between 0.21 and 3.71 micrometres.  A composite-cladding
index is modelled as the air-fill-fraction weighted average of air and glass,
which is the usual scalar effective-medium reduction for a microstructured
cladding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .errors import ConfigError, ValidityWindowError

#: Speed of light in vacuum [m/s].
SPEED_OF_LIGHT_M_S = 299792458.0

#: 2*pi*c expressed in (rad/s) * um, so that omega = TWO_PI_C_UM / lambda_um.
TWO_PI_C_UM = 2.0 * np.pi * SPEED_OF_LIGHT_M_S * 1e6


def omega_from_lambda_um(lambda_um):
    """Angular frequency [rad/s] for a vacuum wavelength in micrometres."""
    lam = np.asarray(lambda_um, dtype=float)
    if np.any(lam <= 0.0):
        raise ValidityWindowError("wavelength must be positive")
    return TWO_PI_C_UM / lam


def lambda_um_from_omega(omega_rad_s):
    """Vacuum wavelength [um] for an angular frequency in rad/s."""
    om = np.asarray(omega_rad_s, dtype=float)
    if np.any(om <= 0.0):
        raise ValidityWindowError("angular frequency must be positive")
    return TWO_PI_C_UM / om


@dataclass(frozen=True)
class SellmeierModel:
    """Three-plus-term Sellmeier fit n^2(lambda) = 1 + sum b_j lambda^2/(lambda^2 - c_j).

    Attributes
    ----------
    b:
        Dimensionless oscillator strengths.
    c_um2:
        Resonance wavelengths squared, in um^2.
    lambda_min_um, lambda_max_um:
        Validity window of the fit; queries outside raise
        :class:`~sfwm.errors.ValidityWindowError`.
    """

    b: tuple[float, ...]
    c_um2: tuple[float, ...]
    lambda_min_um: float
    lambda_max_um: float

    def __post_init__(self) -> None:
        if len(self.b) != len(self.c_um2) or not self.b:
            raise ConfigError("sellmeier: b and c_um2 must be equal-length, non-empty")
        if not (0.0 < self.lambda_min_um < self.lambda_max_um):
            raise ConfigError("sellmeier: invalid validity window")

    # -- frequency-window helpers -------------------------------------------------
    @property
    def omega_min_rad_s(self) -> float:
        """Lowest valid angular frequency (longest wavelength)."""
        return float(TWO_PI_C_UM / self.lambda_max_um)

    @property
    def omega_max_rad_s(self) -> float:
        """Highest valid angular frequency (shortest wavelength)."""
        return float(TWO_PI_C_UM / self.lambda_min_um)

    def check_lambda_um(self, lambda_um) -> np.ndarray:
        lam = np.asarray(lambda_um, dtype=float)
        if np.any(lam < self.lambda_min_um) or np.any(lam > self.lambda_max_um):
            raise ValidityWindowError(
                f"wavelength outside validity window "
                f"[{self.lambda_min_um}, {self.lambda_max_um}] um"
            )
        return lam

    # -- evaluation ---------------------------------------------------------------
    def index(self, lambda_um):
        """Refractive index at vacuum wavelength(s) in micrometres."""
        lam = self.check_lambda_um(lambda_um)
        lam2 = lam * lam
        n2 = np.ones_like(lam2)
        for bj, cj in zip(self.b, self.c_um2):
            n2 = n2 + bj * lam2 / (lam2 - cj)
        return np.sqrt(n2)

    def index_omega(self, omega_rad_s):
        """Refractive index at angular frequency(ies) in rad/s."""
        return self.index(lambda_um_from_omega(omega_rad_s))

    # -- (de)serialization ----------------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        return {
            "b": list(self.b),
            "c_um2": list(self.c_um2),
            "lambda_min_um": self.lambda_min_um,
            "lambda_max_um": self.lambda_max_um,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SellmeierModel":
        try:
            return cls(
                b=tuple(float(x) for x in data["b"]),
                c_um2=tuple(float(x) for x in data["c_um2"]),
                lambda_min_um=float(data["lambda_min_um"]),
                lambda_max_um=float(data["lambda_max_um"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"sellmeier: malformed coefficient set: {exc}") from exc

    @classmethod
    def from_json(cls, path: str | Path) -> "SellmeierModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


#: Fused-silica default (Malitson three-term fit, 0.21-3.71 um).
FUSED_SILICA = SellmeierModel(
    b=(0.6961663, 0.4079426, 0.8974794),
    c_um2=(0.0684043**2, 0.1162414**2, 9.896161**2),
    lambda_min_um=0.21,
    lambda_max_um=3.71,
)


def silica_index(lambda_um, model: SellmeierModel = FUSED_SILICA):
    """Glass index at the given vacuum wavelength(s) [um]."""
    return model.index(lambda_um)


def cladding_index(air_fill_fraction: float, lambda_um,
                   model: SellmeierModel = FUSED_SILICA):
    """Effective cladding index: air-fraction weighted average of air and glass.

    ``f = 0`` reproduces the solid glass, ``f = 1`` gives vacuum/air, and the
    value interpolates linearly in between.
    """
    f = float(air_fill_fraction)
    return f * 1.0 + (1.0 - f) * model.index(lambda_um)
