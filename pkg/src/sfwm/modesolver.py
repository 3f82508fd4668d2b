"""Fundamental-mode effective index of a high-contrast step-index equivalent fiber.

The microstructured fiber is reduced to a two-level step-index profile: a glass
core of radius ``r`` and a uniform composite cladding whose index is the
air-fraction weighted average of air and glass.  Because the index contrast is
large, the scalar weak-guidance approximation is *not* adequate; this module
solves the exact vectorial eigenvalue problem of the fundamental (HE11) mode.

For azimuthal order one, the dispersion relation of the step profile reads::

    (Jt + Kt) * (Jt + s*Kt) = (1/u^2 + 1/w^2) * (1/u^2 + s/w^2)

with ``Jt = (J0(u) - J1(u)/u) / (u J1(u))``,
``Kt = -(K0(w)/K1(w) + 1/w) / w``, ``s = (n_cl/n_co)^2``, ``u^2 + w^2 = V^2``.

Treating the relation as a quadratic in ``Jt`` and keeping the branch that
connects continuously to the fundamental solution gives a single-valued
function ``g(u)`` whose first sign change on ``(0, min(V, j11))`` is the HE11
eigenvalue (``j11`` is the first zero of J1; J1 > 0 on that interval, so g has
no poles there).  In the weak-guidance limit the relation collapses to the
familiar scalar LP01 equation, and for V -> infinity the eigenvalue tends to
the first zero of J0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import j0, j1, k0e, k1e

from .errors import DomainError, ModeSolveError
from .sellmeier import (
    FUSED_SILICA,
    SPEED_OF_LIGHT_M_S,
    SellmeierModel,
    lambda_um_from_omega,
)

#: First zero of the Bessel function J1 (upper limit of the HE11 search interval).
J1_FIRST_ZERO = 3.831705970207512

#: First zero of J0 (large-V limit of the HE11 transverse eigenvalue).
J0_FIRST_ZERO = 2.404825557695773

#: Number of samples in the coarse sign-change scan.
COARSE_SCAN_POINTS = 240

#: Fixed bisection iteration count (converges u to float64 resolution).
BISECTION_ITERATIONS = 64


@dataclass(frozen=True)
class FiberGeometry:
    """Two-parameter fiber geometry: core radius and cladding air-fill fraction."""

    core_radius_um: float
    air_fill_fraction: float

    def __post_init__(self) -> None:
        if not (self.core_radius_um > 0.0):
            raise DomainError("geometry: core radius must be positive")
        if not (0.1 <= self.air_fill_fraction <= 0.9):
            raise DomainError(
                "geometry: air-fill fraction must lie in [0.1, 0.9]; "
                f"got {self.air_fill_fraction}"
            )


def he11_eigenfunction(u, V, s):
    """Sign-definite residual g(u) whose first root on (0, min(V, j11)) is HE11.

    Vectorized over broadcastable array arguments.
    """
    w = np.sqrt(np.maximum(V * V - u * u, 1e-300))
    jt = (j0(u) - j1(u) / u) / (u * j1(u))
    kt = -(k0e(w) / k1e(w) + 1.0 / w) / w
    rhs = (1.0 / u**2 + 1.0 / w**2) * (1.0 / u**2 + s / w**2)
    disc = kt * kt * (1.0 - s) ** 2 + 4.0 * rhs
    return jt - 0.5 * (-(1.0 + s) * kt - np.sqrt(disc))


def he11_transverse_eigenvalue(V, s):
    """HE11 transverse eigenvalue u for arrays of V-number and index ratio s.

    Coarse scan for the first sign change followed by a fixed number of
    bisection steps; fully vectorized, deterministic.

    Raises
    ------
    ModeSolveError
        If no sign change is bracketed for at least one entry.
    """
    V = np.asarray(V, dtype=float)
    s = np.asarray(s, dtype=float)
    u_hi = np.minimum(V, J1_FIRST_ZERO) * (1.0 - 1e-12)

    lo = np.full(V.shape, np.nan)
    hi = np.full(V.shape, np.nan)
    found = np.zeros(V.shape, dtype=bool)
    t = np.linspace(1e-6, 1.0, COARSE_SCAN_POINTS)
    g_prev = he11_eigenfunction(u_hi * t[0], V, s)
    for i in range(1, COARSE_SCAN_POINTS):
        g_cur = he11_eigenfunction(u_hi * t[i], V, s)
        fresh = (~found) & (np.sign(g_cur) != np.sign(g_prev))
        lo = np.where(fresh, u_hi * t[i - 1], lo)
        hi = np.where(fresh, u_hi * t[i], hi)
        found |= fresh
        g_prev = g_cur
    if not np.all(found):
        bad = np.nonzero(~found)[0][:4]
        raise ModeSolveError(
            f"fundamental-mode eigenvalue not bracketed for {np.count_nonzero(~found)} "
            f"sample(s); first V values: {np.atleast_1d(V)[bad]}"
        )

    g_lo = he11_eigenfunction(lo, V, s)
    for _ in range(BISECTION_ITERATIONS):
        mid = 0.5 * (lo + hi)
        g_mid = he11_eigenfunction(mid, V, s)
        same = np.sign(g_mid) == np.sign(g_lo)
        lo = np.where(same, mid, lo)
        g_lo = np.where(same, g_mid, g_lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def effective_index(geometry: FiberGeometry, omega_rad_s,
                    model: SellmeierModel = FUSED_SILICA):
    """HE11 effective index at angular frequency(ies) [rad/s].

    Raises :class:`~sfwm.errors.ValidityWindowError` outside the material
    window and :class:`~sfwm.errors.ModeSolveError` if the eigenvalue search
    fails.
    """
    omega = np.atleast_1d(np.asarray(omega_rad_s, dtype=float))
    lam_um = lambda_um_from_omega(omega)
    n_co = model.index(lam_um)
    n_cl = geometry.air_fill_fraction + (1.0 - geometry.air_fill_fraction) * n_co
    k0_r = omega / SPEED_OF_LIGHT_M_S * (geometry.core_radius_um * 1e-6)
    V = k0_r * np.sqrt(n_co**2 - n_cl**2)
    s = (n_cl / n_co) ** 2
    u = he11_transverse_eigenvalue(V, s)
    n_eff = np.sqrt(n_co**2 - (u / k0_r) ** 2)
    return n_eff if np.ndim(omega_rad_s) else float(n_eff[0])


def propagation_constant(geometry: FiberGeometry, omega_rad_s,
                         model: SellmeierModel = FUSED_SILICA):
    """HE11 propagation constant k = n_eff * omega / c, in 1/m."""
    omega = np.asarray(omega_rad_s, dtype=float)
    return effective_index(geometry, omega, model) * omega / SPEED_OF_LIGHT_M_S
