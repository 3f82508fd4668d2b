"""Chromatic dispersion of the guided mode: cached k(omega), derivatives, and
zero-dispersion frequencies.

A :class:`DispersionProfile` densely samples the exact mode solve over the
material validity window once (2000 points by default), keeps a cubic-spline
interpolant of k(omega) for bulk queries, and evaluates high-order derivatives
by local Chebyshev fits of *freshly solved* (not interpolated) k values, which
keeps orders up to six above the numerical noise floor.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from scipy.interpolate import CubicSpline

from .errors import DomainError, NumericError
from .modesolver import FiberGeometry, effective_index
from .sellmeier import (
    FUSED_SILICA,
    SPEED_OF_LIGHT_M_S,
    SellmeierModel,
    lambda_um_from_omega,
)

#: Default number of cached samples across the validity window.
DEFAULT_CACHE_POINTS = 2000

#: Default relative half-widths of the local Chebyshev fit window, per
#: derivative order.  Orders >= 3 need wider windows to stay above the
#: cancellation noise of double-precision k values.
DEFAULT_HALF_WIDTH_FRAC = {
    0: 0.04,
    1: 0.04,
    2: 0.04,
    3: 0.08,
    4: 0.15,
    5: 0.20,
    6: 0.25,
}

#: Degree of the local Chebyshev fit.
CHEB_DEGREE = 20

#: Relative margin kept clear of the validity-window edges when scanning for
#: zero-dispersion frequencies (derivative windows need room on both sides).
ZD_EDGE_MARGIN = 0.06

#: Samples in the zero-dispersion coarse scan.
ZD_SCAN_POINTS = 400

#: Bisection iterations for zero-dispersion refinement (relative accuracy is
#: limited by the derivative noise floor, well below 1e-10 relative).
ZD_BISECTION_ITERATIONS = 52

#: Finite-difference relative steps per derivative order for the independent
#: cross-check estimator (central differences + one Richardson step).
FD_REL_STEP = {
    0: 0.0,
    1: 1e-3,
    2: 2e-3,
    3: 5e-3,
    4: 5e-2,
    5: 4e-2,
    6: 5e-2,
}


class DispersionProfile:
    """Immutable cached dispersion of the fundamental mode for one geometry.

    Build once with :func:`build_profile`; all methods are pure and safe to
    call concurrently.
    """

    def __init__(self, geometry: FiberGeometry, model: SellmeierModel = FUSED_SILICA,
                 cache_points: int = DEFAULT_CACHE_POINTS):
        if cache_points < 100:
            raise DomainError("profile: cache_points must be >= 100")
        self._geometry = geometry
        self._model = model
        self._cache_points = int(cache_points)
        omega = np.linspace(model.omega_min_rad_s, model.omega_max_rad_s,
                            self._cache_points)
        n_eff = effective_index(geometry, omega, model)
        k = n_eff * omega / SPEED_OF_LIGHT_M_S
        if not np.all(np.diff(k) > 0.0):
            raise NumericError(
                "profile: cached propagation constant is not strictly increasing"
            )
        self._omega_grid = omega
        self._n_eff_grid = n_eff
        self._k_grid = k
        self._spline = CubicSpline(omega, k)
        self._zd_roots: np.ndarray | None = None

    # -- basic accessors -----------------------------------------------------------
    @property
    def geometry(self) -> FiberGeometry:
        return self._geometry

    @property
    def model(self) -> SellmeierModel:
        return self._model

    @property
    def cache_points(self) -> int:
        return self._cache_points

    @property
    def omega_grid(self) -> np.ndarray:
        return self._omega_grid.copy()

    @property
    def n_eff_grid(self) -> np.ndarray:
        return self._n_eff_grid.copy()

    @property
    def k_grid(self) -> np.ndarray:
        return self._k_grid.copy()

    @property
    def omega_min(self) -> float:
        return float(self._omega_grid[0])

    @property
    def omega_max(self) -> float:
        return float(self._omega_grid[-1])

    def _check_omega(self, omega) -> np.ndarray:
        om = np.asarray(omega, dtype=float)
        if np.any(om < self.omega_min) or np.any(om > self.omega_max):
            raise DomainError(
                "frequency outside the cached validity window "
                f"[{self.omega_min:.6g}, {self.omega_max:.6g}] rad/s"
            )
        return om

    # -- evaluation ------------------------------------------------------------------
    def k(self, omega):
        """Propagation constant [1/m] from the cached spline."""
        om = self._check_omega(omega)
        out = self._spline(om)
        return out if np.ndim(omega) else float(out)

    def n_eff(self, omega):
        """Effective index from the cached spline."""
        om = self._check_omega(omega)
        out = self._spline(om) * SPEED_OF_LIGHT_M_S / om
        return out if np.ndim(omega) else float(out)

    def k_or_nan(self, omega):
        """Spline k(omega), with NaN (instead of an error) outside the window.

        Intended for grid assembly where out-of-window corners must simply be
        masked rather than abort the computation.
        """
        om = np.asarray(omega, dtype=float)
        inside = (om >= self.omega_min) & (om <= self.omega_max)
        out = np.where(inside, self._spline(np.clip(om, self.omega_min, self.omega_max)),
                       np.nan)
        return out if np.ndim(omega) else float(out)

    def k_exact(self, omega):
        """Propagation constant from a fresh mode solve (no interpolation)."""
        om = self._check_omega(np.atleast_1d(np.asarray(omega, dtype=float)))
        n_eff = effective_index(self._geometry, om, self._model)
        out = n_eff * om / SPEED_OF_LIGHT_M_S
        return out if np.ndim(omega) else float(out[0])

    # -- derivatives -------------------------------------------------------------------
    def k_derivative(self, omega0: float, order: int,
                     half_width_frac: float | None = None,
                     degree: int = CHEB_DEGREE) -> float:
        """n-th derivative of k at omega0 [s^n/m], n = 0..6.

        A local Chebyshev polynomial is fitted to freshly solved k values on a
        window ``omega0 * (1 +/- half_width_frac)`` (clipped to the validity
        window) and differentiated analytically.
        """
        if order not in DEFAULT_HALF_WIDTH_FRAC:
            raise DomainError(f"derivative order must be 0..6, got {order}")
        om0 = float(self._check_omega(omega0))
        frac = DEFAULT_HALF_WIDTH_FRAC[order] if half_width_frac is None else float(half_width_frac)
        h = frac * om0
        a = max(om0 - h, self.omega_min)
        b = min(om0 + h, self.omega_max)
        if not b > a:
            raise DomainError("derivative window collapsed at the validity edge")
        nodes = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
        om_nodes = 0.5 * (a + b) + 0.5 * (b - a) * nodes
        k_nodes = self.k_exact(om_nodes)
        coef = _cheb.chebfit(nodes, k_nodes, degree)
        for _ in range(order):
            coef = _cheb.chebder(coef)
        t0 = (om0 - 0.5 * (a + b)) / (0.5 * (b - a))
        return float(_cheb.chebval(t0, coef) * (2.0 / (b - a)) ** order)

    def k_derivative_fd(self, omega0: float, order: int,
                        rel_step: float | None = None) -> float:
        """Independent derivative estimator: central differences + Richardson.

        Intended as a cross-check of :meth:`k_derivative`; noisier at high
        order but structurally unrelated to the Chebyshev path.
        """
        if order not in FD_REL_STEP:
            raise DomainError(f"derivative order must be 0..6, got {order}")
        om0 = float(self._check_omega(omega0))
        if order == 0:
            return self.k_exact(om0)
        h = (FD_REL_STEP[order] if rel_step is None else float(rel_step)) * om0

        def central(step: float) -> float:
            n = order
            offsets = n / 2.0 - np.arange(n + 1)
            weights = np.array([(-1) ** i * math.comb(n, i) for i in range(n + 1)],
                               dtype=float)
            k_vals = self.k_exact(om0 + offsets * step)
            return float(np.dot(weights, k_vals) / step**n)

        d1 = central(h)
        d2 = central(0.5 * h)
        return (4.0 * d2 - d1) / 3.0

    # -- zero-dispersion frequencies ------------------------------------------------
    def zero_dispersion_frequencies(self) -> np.ndarray:
        """All roots of k''(omega) inside the (margin-inset) validity window.

        Roots are bracketed on a coarse scan of the spline's second derivative
        and refined by bisection of the Chebyshev-fit second derivative.
        Returned sorted ascending; may be empty.  The scan is memoized per
        profile (the geometry is immutable, so the roots never change).
        """
        if self._zd_roots is not None:
            return self._zd_roots.copy()
        lo = self.omega_min * (1.0 + ZD_EDGE_MARGIN)
        hi = self.omega_max * (1.0 - ZD_EDGE_MARGIN)
        grid = np.linspace(lo, hi, ZD_SCAN_POINTS)
        d2 = self._spline.derivative(2)(grid)
        roots = []
        for i in range(len(grid) - 1):
            if d2[i] * d2[i + 1] < 0.0:
                a, b = float(grid[i]), float(grid[i + 1])
                fa = self.k_derivative(a, 2)
                fb = self.k_derivative(b, 2)
                if fa * fb > 0.0:
                    continue
                for _ in range(ZD_BISECTION_ITERATIONS):
                    m = 0.5 * (a + b)
                    fm = self.k_derivative(m, 2)
                    if fa * fm <= 0.0:
                        b, fb = m, fm
                    else:
                        a, fa = m, fm
                roots.append(0.5 * (a + b))
        self._zd_roots = np.array(sorted(roots))
        return self._zd_roots.copy()

    def zero_dispersion_frequency(self) -> float:
        """The highest-frequency root of k'' (the design branch).

        Raises :class:`~sfwm.errors.NumericError` if no root exists.
        """
        roots = self.zero_dispersion_frequencies()
        if roots.size == 0:
            raise NumericError("no zero-dispersion frequency in the validity window")
        return float(roots[-1])

    def zero_dispersion_wavelengths_um(self) -> np.ndarray:
        """Vacuum wavelengths [um] of all zero-dispersion roots, ascending."""
        roots = self.zero_dispersion_frequencies()
        if roots.size == 0:
            return roots
        return np.sort(lambda_um_from_omega(roots))


def build_profile(geometry: FiberGeometry, model: SellmeierModel = FUSED_SILICA,
                  cache_points: int = DEFAULT_CACHE_POINTS) -> DispersionProfile:
    """Build the cached dispersion profile for a geometry."""
    return DispersionProfile(geometry, model, cache_points)


def build_profile_um(core_radius_um: float, air_fill_fraction: float,
                     model: SellmeierModel = FUSED_SILICA,
                     cache_points: int = DEFAULT_CACHE_POINTS) -> DispersionProfile:
    """Convenience constructor from bare geometry numbers."""
    return DispersionProfile(FiberGeometry(core_radius_um, air_fill_fraction),
                             model, cache_points)
