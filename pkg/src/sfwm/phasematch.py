"""Wavevector mismatch for continuous-wave four-wave mixing, its fourth-order
expansion about the zero-dispersion frequency, and phase-matching contours.

Conventions
-----------
All frequencies are angular [rad/s], propagation constants in 1/m, powers in
W, and the nonlinear parameter gamma in 1/(W m).  The nonlinear contribution
enters as ``-(gamma1 P1 + gamma2 P2)``.

For a signal/idler pair the pump arguments are evaluated at
``(s +/- dp) / 2`` with ``s = omega_s + omega_i`` and ``dp = omega1 - omega2``,
i.e. at the pump pair that conserves energy with the given signal/idler sum.
This form makes signal/idler exchange and pump-swap symmetries exact in
floating point, and it vanishes identically (at zero power) along the trivial
lines ``omega_s - omega_i = +/- dp``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import contour_segments
from .dispersion import DispersionProfile
from .errors import DomainError, SingularCurvatureError

#: Pumps closer than this relative separation are treated as degenerate.
DEGENERATE_REL_TOL = 1e-12

#: Default contour-tracing grid (per axis).
DEFAULT_CONTOUR_GRID = 800

#: Vertices within this many grid cells of a trivial line inherit its label.
TRIVIAL_LABEL_CELLS = 3.0

#: Bisection iterations when polishing contour vertices onto the zero level.
VERTEX_POLISH_ITERATIONS = 44


@dataclass(frozen=True)
class PumpPair:
    """Two continuous-wave pumps (possibly degenerate).

    Attributes
    ----------
    omega1_rad_s, omega2_rad_s:
        Pump angular frequencies.  Order is immaterial.
    power1_w, power2_w:
        Pump powers.
    gamma1_w_m, gamma2_w_m:
        Nonlinear parameter seen by each pump, in 1/(W m).
    """

    omega1_rad_s: float
    omega2_rad_s: float
    power1_w: float = 0.0
    power2_w: float = 0.0
    gamma1_w_m: float = 0.0
    gamma2_w_m: float = 0.0

    def __post_init__(self) -> None:
        if self.omega1_rad_s <= 0.0 or self.omega2_rad_s <= 0.0:
            raise DomainError("pump frequencies must be positive")
        if self.power1_w < 0.0 or self.power2_w < 0.0:
            raise DomainError("pump powers must be non-negative")
        if self.gamma1_w_m < 0.0 or self.gamma2_w_m < 0.0:
            raise DomainError("nonlinear parameters must be non-negative")

    # -- derived quantities ---------------------------------------------------------
    @property
    def omega_sum(self) -> float:
        return self.omega1_rad_s + self.omega2_rad_s

    @property
    def omega_difference(self) -> float:
        return self.omega1_rad_s - self.omega2_rad_s

    @property
    def power_term(self) -> float:
        """Nonlinear wavevector contribution gamma1 P1 + gamma2 P2 [1/m]."""
        return self.gamma1_w_m * self.power1_w + self.gamma2_w_m * self.power2_w

    @property
    def is_degenerate(self) -> bool:
        mean = 0.5 * (self.omega1_rad_s + self.omega2_rad_s)
        return abs(self.omega_difference) <= DEGENERATE_REL_TOL * mean

    # -- constructors -----------------------------------------------------------------
    @classmethod
    def degenerate(cls, omega_rad_s: float, power_w: float = 0.0,
                   gamma_w_m: float = 0.0) -> "PumpPair":
        """Single pump of total power ``power_w`` split over two equal lines."""
        return cls(omega_rad_s, omega_rad_s, 0.5 * power_w, 0.5 * power_w,
                   gamma_w_m, gamma_w_m)

    @classmethod
    def symmetric(cls, omega_center_rad_s: float, delta_rad_s: float,
                  power_each_w: float = 0.0, gamma_w_m: float = 0.0) -> "PumpPair":
        """Pumps at ``center +/- delta`` with equal powers."""
        return cls(omega_center_rad_s + delta_rad_s, omega_center_rad_s - delta_rad_s,
                   power_each_w, power_each_w, gamma_w_m, gamma_w_m)

    def swapped(self) -> "PumpPair":
        return PumpPair(self.omega2_rad_s, self.omega1_rad_s, self.power2_w,
                        self.power1_w, self.gamma2_w_m, self.gamma1_w_m)


# --------------------------------------------------------------------------------------
# mismatch functions
# --------------------------------------------------------------------------------------

def delta_k_cw(profile: DispersionProfile, pump: PumpPair, omega_s, omega_i):
    """Wavevector mismatch over the signal/idler plane [1/m].

    Pump arguments ride the energy-conservation sum (see module docstring), so
    the mismatch is exactly signal/idler-exchange and pump-swap symmetric.
    """
    om_s = np.asarray(omega_s, dtype=float)
    om_i = np.asarray(omega_i, dtype=float)
    s = om_s + om_i
    dp = pump.omega_difference
    arg1 = 0.5 * (s + dp)
    arg2 = 0.5 * (s - dp)
    # grouping matters: both parenthesized sums are commutative in floating
    # point, which makes exchange and pump-swap symmetry bitwise exact
    out = ((profile.k(arg1) + profile.k(arg2))
           - (profile.k(om_s) + profile.k(om_i))
           - pump.power_term)
    return out if (np.ndim(omega_s) or np.ndim(omega_i)) else float(out)


def delta_k_grid(profile: DispersionProfile, pump: PumpPair,
                 omega_s_grid, omega_i_grid) -> np.ndarray:
    """Mismatch sampled on the outer product of two frequency axes.

    Entry [i, j] corresponds to (omega_i_grid[i], omega_s_grid[j]); points
    whose pump arguments leave the validity window are NaN.
    """
    xs = np.asarray(omega_s_grid, dtype=float)
    ys = np.asarray(omega_i_grid, dtype=float)
    s = ys[:, None] + xs[None, :]
    dp = pump.omega_difference
    with np.errstate(invalid="ignore"):
        out = ((profile.k_or_nan(0.5 * (s + dp)) + profile.k_or_nan(0.5 * (s - dp)))
               - (profile.k_or_nan(ys)[:, None] + profile.k_or_nan(xs)[None, :])
               - pump.power_term)
    return out


def delta_k_pinned_grid(profile: DispersionProfile, pump: PumpPair,
                        omega_s, omega_i):
    """CW mismatch with the pump wavevectors pinned at the physical pump
    frequencies, on the outer-product grid ``(omega_i rows, omega_s cols)``.

    On the energy-conservation surface ``omega_s + omega_i = omega1 + omega2``
    this equals :func:`delta_k_grid`.  Off the surface the pumps stay
    monochromatic instead of riding the frequency sum; the joint-spectrum
    builders use this reading, which makes configurations sharing the pump
    wavevector sum (degenerate vs non-degenerate pairs) produce identical
    states.
    """
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    k_pumps = profile.k(pump.omega1_rad_s) + profile.k(pump.omega2_rad_s)
    ks = profile.k_or_nan(omega_s)
    ki = profile.k_or_nan(omega_i)
    return (k_pumps - np.add.outer(ki, ks)) - pump.power_term


def delta_k_singles(profile: DispersionProfile, pump: PumpPair, omega):
    """Mismatch along the energy-conservation line, as a function of one
    emission frequency [1/m]: the partner sits at ``omega1 + omega2 - omega``.
    """
    om = np.asarray(omega, dtype=float)
    s = pump.omega_sum
    out = (profile.k(pump.omega1_rad_s) + profile.k(pump.omega2_rad_s)
           - profile.k(om) - profile.k(s - om) - pump.power_term)
    return out if np.ndim(omega) else float(out)


# --------------------------------------------------------------------------------------
# fourth-order expansion about the zero-dispersion frequency
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class TaylorCoefficients:
    """Dispersion data entering the fourth-order mismatch expansion.

    ``dk[n]`` holds k^(n)(pump_hi) + k^(n)(pump_lo) - 2 k^(n)(omega_zd) for
    n = 0..4; ``k3``/``k4`` are the third/fourth derivatives at the
    zero-dispersion frequency; ``power_term`` is the nonlinear contribution.
    """

    omega_zd: float
    k3: float
    k4: float
    dk: tuple[float, float, float, float, float]
    power_term: float = 0.0

    @property
    def dk0(self) -> float:
        return self.dk[0]


def taylor_coefficients(profile: DispersionProfile, pump: PumpPair,
                        omega_zd: float | None = None) -> TaylorCoefficients:
    """Expansion coefficients for pumps placed symmetrically about the
    zero-dispersion frequency.

    Raises
    ------
    DomainError
        If the pump sum is not centered on the zero-dispersion frequency
        (relative mismatch above 1e-9) - the expansion is derived for the
        symmetric configuration.
    """
    wzd = profile.zero_dispersion_frequency() if omega_zd is None else float(omega_zd)
    if abs(pump.omega_sum - 2.0 * wzd) > 1e-9 * wzd:
        raise DomainError(
            "fourth-order expansion requires pumps symmetric about the "
            "zero-dispersion frequency"
        )
    half = 0.5 * abs(pump.omega_difference)
    om_hi = wzd + half
    om_lo = wzd - half
    dk = []
    for n in range(5):
        if half == 0.0:
            dk.append(0.0)
            continue
        dk.append(profile.k_derivative(om_hi, n) + profile.k_derivative(om_lo, n)
                  - 2.0 * profile.k_derivative(wzd, n))
    return TaylorCoefficients(
        omega_zd=wzd,
        k3=profile.k_derivative(wzd, 3),
        k4=profile.k_derivative(wzd, 4),
        dk=tuple(dk),
        power_term=pump.power_term,
    )


def delta_k_taylor4(coeffs: TaylorCoefficients, delta_plus, delta_minus):
    """Fourth-order mismatch in sum/difference detunings from the
    zero-dispersion frequency.

    ``delta_plus  = (omega_s - omega_zd) + (omega_i - omega_zd)``,
    ``delta_minus = (omega_s - omega_zd) - (omega_i - omega_zd)``.

    Accurate to O(detuning^5); the residual against the full mismatch shrinks
    with fitted order >= 4.5.
    """
    dp = np.asarray(delta_plus, dtype=float)
    dm = np.asarray(delta_minus, dtype=float)
    dk0, dk1, dk2, dk3, dk4 = coeffs.dk
    dm2 = dm * dm
    out = (
        -coeffs.power_term
        + dk0
        + 0.5 * dk1 * dp
        + 0.125 * dk2 * dp * dp
        + (dk3 * dp**3 - 6.0 * coeffs.k3 * dp * dm2) / 48.0
        + (dk4 * dp**4 - 2.0 * coeffs.k4 * (6.0 * dp * dp + dm2) * dm2) / 384.0
    )
    return out if (np.ndim(delta_plus) or np.ndim(delta_minus)) else float(out)


def contour_curvature_at_origin(coeffs: TaylorCoefficients) -> float:
    """Curvature scale |k4 / (12 k3)| of the non-trivial contour at the
    degenerate phase-matched point (in 1/(rad/s), i.e. the quadratic
    coefficient of the sum-detuning versus difference-detuning parabola is
    half this value).

    Raises
    ------
    SingularCurvatureError
        If the third derivative vanishes.
    """
    if coeffs.k3 == 0.0:
        raise SingularCurvatureError(
            "curvature undefined: third-order dispersion vanishes"
        )
    return abs(coeffs.k4 / (12.0 * coeffs.k3))


def curvature_concavity_sign(coeffs: TaylorCoefficients) -> int:
    """-1 when the non-trivial contour opens toward negative sum detuning
    (the case for k4/k3 > 0), +1 for the opposite orientation, 0 if flat."""
    if coeffs.k3 == 0.0:
        raise SingularCurvatureError(
            "concavity undefined: third-order dispersion vanishes"
        )
    if coeffs.k4 == 0.0:
        return 0
    return -1 if (coeffs.k4 / coeffs.k3) > 0.0 else 1


# --------------------------------------------------------------------------------------
# contour tracing
# --------------------------------------------------------------------------------------

@dataclass(frozen=True)
class PhasematchContour:
    """One traced zero-mismatch polyline.

    ``vertices`` has shape (n, 2) with columns (omega_s, omega_i) [rad/s];
    ``closed`` marks loops (first vertex == last vertex is *not* duplicated).
    """

    branch_label: str
    vertices: np.ndarray
    closed: bool
    cell_size: tuple[float, float]
    metadata: dict = field(default_factory=dict)


def _delta_k_or_nan(profile: DispersionProfile, pump: PumpPair, omega_s, omega_i):
    """Pointwise mismatch with NaN (instead of an error) outside the window."""
    om_s = np.asarray(omega_s, dtype=float)
    om_i = np.asarray(omega_i, dtype=float)
    s = om_s + om_i
    dp = pump.omega_difference
    with np.errstate(invalid="ignore"):
        return ((profile.k_or_nan(0.5 * (s + dp)) + profile.k_or_nan(0.5 * (s - dp)))
                - (profile.k_or_nan(om_s) + profile.k_or_nan(om_i))
                - pump.power_term)


def _polish_vertices(profile, pump, points, orientation, lo, hi):
    """Bisection along grid edges so that each vertex sits on the zero level.

    ``orientation`` is +1 for horizontal edges (x varies, y fixed) and 0 for
    vertical edges; ``lo``/``hi`` bracket the moving coordinate.
    """
    if points.shape[0] == 0:
        return points

    x = points[:, 0].copy()
    y = points[:, 1].copy()
    moving_lo = lo.copy()
    moving_hi = hi.copy()

    def eval_dk(coord):
        om_s = np.where(orientation == 1, coord, x)
        om_i = np.where(orientation == 1, y, coord)
        return _delta_k_or_nan(profile, pump, om_s, om_i)

    f_lo = eval_dk(moving_lo)
    f_hi = eval_dk(moving_hi)
    # keep only genuine brackets; others (degenerate corners) stay untouched
    ok = (np.sign(f_lo) != np.sign(f_hi)) & np.isfinite(f_lo) & np.isfinite(f_hi)
    for _ in range(VERTEX_POLISH_ITERATIONS):
        mid = 0.5 * (moving_lo + moving_hi)
        f_mid = eval_dk(mid)
        same = np.sign(f_mid) == np.sign(f_lo)
        moving_lo = np.where(ok & same, mid, moving_lo)
        f_lo = np.where(ok & same, f_mid, f_lo)
        moving_hi = np.where(ok & ~same, mid, moving_hi)
    polished = 0.5 * (moving_lo + moving_hi)
    coord = np.where(ok, polished, np.where(orientation == 1, x, y))
    out = points.copy()
    out[:, 0] = np.where(orientation == 1, coord, x)
    out[:, 1] = np.where(orientation == 1, y, coord)
    return out


def _chain_segments(segments: np.ndarray) -> list[tuple[np.ndarray, bool]]:
    """Join shared-endpoint segments into polylines.

    Marching squares emits each edge crossing with identical floating-point
    coordinates in both adjacent cells, so exact-coordinate matching chains
    correctly.  Returns (vertices, closed) pairs in deterministic order.
    """
    n = segments.shape[0]
    adj: dict[tuple[float, float], list[int]] = {}
    for idx in range(n):
        a = (segments[idx, 0], segments[idx, 1])
        b = (segments[idx, 2], segments[idx, 3])
        adj.setdefault(a, []).append(idx)
        adj.setdefault(b, []).append(idx)

    visited = np.zeros(n, dtype=bool)

    def walk(start_key):
        pts = [start_key]
        key = start_key
        while True:
            nxt = None
            for seg in adj[key]:
                if not visited[seg]:
                    nxt = seg
                    break
            if nxt is None:
                break
            visited[nxt] = True
            a = (segments[nxt, 0], segments[nxt, 1])
            b = (segments[nxt, 2], segments[nxt, 3])
            key = b if a == key else a
            pts.append(key)
        return pts

    polylines: list[tuple[np.ndarray, bool]] = []
    # open curves first: endpoints of odd degree, smallest coordinate first
    open_keys = sorted(k for k, lst in adj.items() if len(lst) % 2 == 1)
    for key in open_keys:
        if all(visited[seg] for seg in adj[key]):
            continue
        pts = walk(key)
        if len(pts) > 1:
            polylines.append((np.array(pts), False))
    # remaining are loops
    for key in sorted(adj.keys()):
        if all(visited[seg] for seg in adj[key]):
            continue
        pts = walk(key)
        if len(pts) > 1:
            closed = pts[0] == pts[-1]
            if closed:
                pts = pts[:-1]
            polylines.append((np.array(pts), closed))
    return polylines


def _trivial_fraction(vertices: np.ndarray, pump: PumpPair,
                      cell: tuple[float, float]) -> float:
    """Fraction of vertices within the trivial-line proximity band."""
    diff = vertices[:, 0] - vertices[:, 1]
    scale = float(np.hypot(cell[0], cell[1]))
    d1 = np.abs(diff - pump.omega_difference) / scale
    d2 = np.abs(diff + pump.omega_difference) / scale
    return float(np.mean(np.minimum(d1, d2) <= TRIVIAL_LABEL_CELLS))


def _trivial_line_distance(x, y, pump: PumpPair):
    """Perpendicular distance to the nearest trivial line (rad/s units)."""
    diff = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    d1 = np.abs(diff - pump.omega_difference)
    d2 = np.abs(diff + pump.omega_difference)
    return np.minimum(d1, d2) / np.sqrt(2.0)


def _stitch_polylines(polylines: list[tuple[np.ndarray, bool]],
                      cell_diag: float,
                      pump: PumpPair) -> list[tuple[np.ndarray, bool]]:
    """Re-join open polylines cut apart by the masked trivial-line band.

    Two endpoints may be bridged when they are within 1.5 cells of each
    other, or within 6 cells when both lie inside the trivial band (a branch
    crossing or tangent to the masked line loses a few cells there).  The
    globally closest admissible pair merges first; afterwards an open
    polyline whose own endpoints are admissible is closed.
    """
    near_tol = 1.5 * cell_diag
    band_tol = 6.0 * cell_diag
    band_dist = 2.0 * cell_diag

    def admissible(pa, pb) -> bool:
        dist = float(np.hypot(pa[0] - pb[0], pa[1] - pb[1]))
        if dist <= near_tol:
            return True
        if dist <= band_tol:
            da = float(_trivial_line_distance(pa[0], pa[1], pump))
            db = float(_trivial_line_distance(pb[0], pb[1], pump))
            return da <= band_dist and db <= band_dist
        return False

    closed_out = [(v, c) for v, c in polylines if c]
    opens = [v for v, c in polylines if not c]

    while len(opens) > 1:
        best = None  # (dist, i, j, rev_i, rev_j)
        for i in range(len(opens)):
            for j in range(i + 1, len(opens)):
                for rev_i in (False, True):
                    for rev_j in (False, True):
                        tail = opens[i][0] if rev_i else opens[i][-1]
                        head = opens[j][-1] if rev_j else opens[j][0]
                        dist = float(np.hypot(tail[0] - head[0],
                                              tail[1] - head[1]))
                        if (best is None or dist < best[0]) and admissible(tail, head):
                            best = (dist, i, j, rev_i, rev_j)
        if best is None:
            break
        _, i, j, rev_i, rev_j = best
        first = opens[i][::-1] if rev_i else opens[i]
        second = opens[j][::-1] if rev_j else opens[j]
        merged = np.vstack([first, second])
        opens = [v for k, v in enumerate(opens) if k not in (i, j)]
        opens.append(merged)

    for verts in opens:
        if verts.shape[0] > 3 and admissible(verts[0], verts[-1]):
            closed_out.append((verts, True))
        else:
            closed_out.append((verts, False))
    return closed_out


def trace_contours(profile: DispersionProfile, pump: PumpPair,
                   omega_s_range: tuple[float, float],
                   omega_i_range: tuple[float, float],
                   grid: int = DEFAULT_CONTOUR_GRID,
                   polish: bool = True,
                   degenerate_tol: float | None = None) -> list[PhasematchContour]:
    """Trace zero-mismatch contours on a rectangular frequency window.

    Marching squares on a ``grid x grid`` sampling with sub-cell linear
    interpolation, followed by per-vertex bisection onto the exact zero level
    and chaining into polylines.  Branches are labeled ``trivial-<n>`` when at
    least half of their vertices lie within three grid cells of the analytic
    zero-power trivial lines, else ``nontrivial-<n>``.

    When the pump power term is below ``degenerate_tol`` (default 1e-9 of
    the local wavevector scale) the mismatch vanishes *identically* along
    the trivial lines; cells inside the one-cell band around those lines
    are masked (they carry only rounding noise), the lines are emitted as
    exact analytic polylines, and branches cut by the band are re-joined.
    """
    if grid < 8:
        raise DomainError("contour grid must be at least 8 points per axis")
    xs = np.linspace(omega_s_range[0], omega_s_range[1], grid)
    ys = np.linspace(omega_i_range[0], omega_i_range[1], grid)
    mismatch_field = delta_k_grid(profile, pump, xs, ys)

    if degenerate_tol is None:
        omega_mid = 0.5 * (profile.omega_min + profile.omega_max)
        degenerate_tol = 1e-9 * abs(profile.k(omega_mid))

    dx = float(xs[1] - xs[0])
    dy = float(ys[1] - ys[0])
    cell_diag = float(np.hypot(dx, dy))
    line_regime = pump.power_term <= degenerate_tol
    exclude = None
    if line_regime:
        # with a vanishing power term the mismatch vanishes *identically*
        # along the trivial lines; grid corners there carry only rounding
        # noise, so mask every cell with a corner inside the one-cell band
        # around a line and emit the lines analytically instead
        xg, yg = np.meshgrid(xs, ys)
        near = _trivial_line_distance(xg, yg, pump) <= 0.7 * max(dx, dy)
        exclude = (near[:-1, :-1] | near[:-1, 1:]
                   | near[1:, 1:] | near[1:, :-1])

    segments = contour_segments(mismatch_field, xs, ys, exclude_cells=exclude)
    if segments.shape[0]:
        # a zero level passing exactly through a grid corner emits
        # zero-length segments; they carry no geometry
        nonzero = ((segments[:, 0] != segments[:, 2])
                   | (segments[:, 1] != segments[:, 3]))
        segments = segments[nonzero]
    polylines = _chain_segments(segments)
    if line_regime:
        # a branch crossing or tangent to the masked band loses a few cells
        # there; re-join those artifact gaps
        polylines = _stitch_polylines(polylines, cell_diag, pump)
    out = []
    for verts, closed in polylines:
        if verts.shape[0] < (3 if closed else 2):
            continue
        if polish:
            verts = _polish_polyline(profile, pump, verts, xs, ys, dx, dy)
        frac = _trivial_fraction(verts, pump, (dx, dy))
        if line_regime:
            kind = "trivial" if frac >= 0.5 else "nontrivial"
        else:
            # at finite power the formerly trivial branches displace and
            # hybridize; anything still skirting those lines is power-split
            kind = "power-split" if frac > 0.05 else "nontrivial"
        out.append(PhasematchContour(
            branch_label=kind,
            vertices=verts,
            closed=closed,
            cell_size=(dx, dy),
            metadata={"trivial_vertex_fraction": frac,
                      "grid": grid,
                      "polished": bool(polish)},
        ))
    out.extend(_analytic_trivial_lines(pump, xs, ys, (dx, dy), degenerate_tol, grid))
    # deterministic ordering: larger contours first, then by first vertex
    out.sort(key=lambda c: (-c.vertices.shape[0],
                            c.vertices[0, 0], c.vertices[0, 1]))
    relabeled = []
    for idx, c in enumerate(out):
        relabeled.append(PhasematchContour(
            branch_label=f"{c.branch_label}-{idx}",
            vertices=c.vertices,
            closed=c.closed,
            cell_size=c.cell_size,
            metadata=c.metadata,
        ))
    return relabeled


def _analytic_trivial_lines(pump: PumpPair, xs, ys, cell, degenerate_tol: float,
                            grid: int) -> list[PhasematchContour]:
    """Exact trivial-line polylines, emitted only when the power term is below
    the degeneracy floor (otherwise the displaced lines are traced normally)."""
    if pump.power_term > degenerate_tol:
        return []
    dp = pump.omega_difference
    offsets = [dp] if pump.is_degenerate else [dp, -dp]
    out = []
    for off in offsets:
        y = xs - off          # along omega_i = omega_s - off
        keep = (y >= ys[0]) & (y <= ys[-1])
        if np.count_nonzero(keep) < 2:
            continue
        verts = np.column_stack([xs[keep], y[keep]])
        out.append(PhasematchContour(
            branch_label="trivial",
            vertices=verts,
            closed=False,
            cell_size=cell,
            metadata={"trivial_vertex_fraction": 1.0, "grid": grid,
                      "polished": False, "analytic": True},
        ))
    return out


def _polish_polyline(profile, pump, verts, xs, ys, dx, dy):
    """Vectorized zero-level polish of every vertex of one polyline."""
    x = verts[:, 0]
    y = verts[:, 1]
    # a marching-squares vertex sits exactly on a grid row (horizontal edge,
    # x is the moving coordinate) or on a grid column (vertical edge)
    iy = np.clip(np.round((y - ys[0]) / dy).astype(int), 0, len(ys) - 1)
    jx_near = np.clip(np.round((x - xs[0]) / dx).astype(int), 0, len(xs) - 1)
    row_dist = np.abs(y - ys[iy])
    col_dist = np.abs(x - xs[jx_near])
    on_row = row_dist <= col_dist
    orientation = np.where(on_row, 1, 0)
    jx = np.clip(np.floor((x - xs[0]) / dx).astype(int), 0, len(xs) - 2)
    jy = np.clip(np.floor((y - ys[0]) / dy).astype(int), 0, len(ys) - 2)
    lo = np.where(on_row, xs[jx], ys[jy])
    hi = np.where(on_row, xs[jx + 1], ys[jy + 1])
    return _polish_vertices(profile, pump, verts, orientation, lo, hi)


def vertex_residuals(profile: DispersionProfile, pump: PumpPair,
                     contour: PhasematchContour):
    """Per-vertex |mismatch| and the local one-cell mismatch variation.

    The tracing contract requires residual <= 1e-3 * variation everywhere.
    """
    x = contour.vertices[:, 0]
    y = contour.vertices[:, 1]
    dx, dy = contour.cell_size
    res = np.abs(_delta_k_or_nan(profile, pump, x, y))
    var = (np.abs(_delta_k_or_nan(profile, pump, x + 0.5 * dx, y)
                  - _delta_k_or_nan(profile, pump, x - 0.5 * dx, y))
           + np.abs(_delta_k_or_nan(profile, pump, x, y + 0.5 * dy)
                    - _delta_k_or_nan(profile, pump, x, y - 0.5 * dy)))
    return res, var
