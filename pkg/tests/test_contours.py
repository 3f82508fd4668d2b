"""Phase-matching contours: geometry of the traced zero set, labels,
power-induced splitting, and the curvature cross-check against the
dispersion-derivative formula."""

import numpy as np
import pytest

from sfwm import (PumpPair, contour_curvature_at_origin,
                  design_zero_dispersion_frequency, taylor_coefficients,
                  trace_contours, vertex_residuals)
from sfwm.phasematch import delta_k_cw

GAMMA = 70.0e-3


def _contiguous_runs(mask, closed):
    """Index runs where ``mask`` holds, honoring cyclic order for loops."""
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1)
    runs = np.split(idx, breaks + 1)
    if closed and len(runs) > 1 and idx[0] == 0 and idx[-1] == mask.size - 1:
        runs = [np.concatenate([runs[-1], runs[0]])] + runs[1:-1]
    return runs


def _window_about_zd(profile, zd, factor=0.92):
    lo = max(profile.omega_min * 1.001, zd * (1.0 - factor))
    hi = min(profile.omega_max * 0.999, zd * (1.0 + factor))
    return (lo, hi)


def _closed_nontrivial(contours):
    return [c for c in contours
            if c.closed and c.branch_label.startswith("nontrivial")]


def _origin_quad_fit(contour, zd):
    """Quadratic fit of sum-detuning vs difference-detuning near the
    degenerate point, on the arc |dm| < 0.04 zd, |dp| < 0.5 |dm|."""
    dm = (contour.vertices[:, 0] - contour.vertices[:, 1])
    dp = (contour.vertices[:, 0] + contour.vertices[:, 1]) - 2.0 * zd
    keep = (np.abs(dm) < 0.04 * zd) & (np.abs(dp) < 0.5 * np.abs(dm))
    assert np.count_nonzero(keep) >= 12, "too few vertices near the origin"
    return np.polyfit(dm[keep], dp[keep], 2), dm[keep]


def test_degenerate_contour_fig1(profile_fig1):
    zd = design_zero_dispersion_frequency(profile_fig1)
    pump = PumpPair.degenerate(zd)
    window = _window_about_zd(profile_fig1, zd)
    contours = trace_contours(profile_fig1, pump, window, window, grid=500)

    closed = _closed_nontrivial(contours)
    assert closed, "expected a closed non-trivial branch"
    loop = max(closed, key=lambda c: c.vertices.shape[0])

    # Analytic trivial line(s) present for the degenerate pump.
    assert any(c.branch_label.startswith("trivial") for c in contours)

    # Tracing accuracy: residual small against the one-cell variation.
    res, var = vertex_residuals(profile_fig1, pump, loop)
    ok = var > 0.0
    assert np.all(res[ok] <= 1.0e-3 * var[ok])

    # Near the degenerate point the branch is tangent to the trivial line
    # (slope -1 in the frequency plane: no linear term in the
    # sum-vs-difference detuning fit) and locally parabolic.
    (c2, c1, _c0), _ = _origin_quad_fit(loop, zd)
    assert abs(c1) < 1.0e-3

    # Convexity of the near-origin lobe: uniform turn sign over the part of
    # the loop away from the second zero-dispersion pinch.  The filtered
    # vertices are evaluated per contiguous run so that no synthetic edge is
    # formed across a filtered-out stretch of the loop.
    verts = loop.vertices
    keep = (verts[:, 0] > 0.5 * zd) & (verts[:, 1] > 0.5 * zd)
    total = 0.0
    weight = 0.0
    for run in _contiguous_runs(keep, loop.closed):
        if run.size < 3:
            continue
        edges = np.diff(verts[run], axis=0)
        cross = edges[:-1, 0] * edges[1:, 1] - edges[:-1, 1] * edges[1:, 0]
        total += cross.sum()
        weight += np.abs(cross).sum()
    assert weight > 0.0
    uniformity = abs(total) / weight
    assert uniformity > 0.999

    # Curvature against the dispersion-derivative formula.
    coeffs = taylor_coefficients(profile_fig1, pump, zd)
    curvature = contour_curvature_at_origin(coeffs)
    assert 2.0 * abs(c2) == pytest.approx(curvature, rel=0.05)


def test_traced_curvature_second_geometry(profile_f05b):
    zd = design_zero_dispersion_frequency(profile_f05b)
    pump = PumpPair.degenerate(zd)
    window = _window_about_zd(profile_f05b, zd)
    contours = trace_contours(profile_f05b, pump, window, window, grid=500)
    closed = _closed_nontrivial(contours)
    assert closed
    loop = max(closed, key=lambda c: c.vertices.shape[0])
    (c2, _c1, _c0), _ = _origin_quad_fit(loop, zd)
    coeffs = taylor_coefficients(profile_f05b, pump, zd)
    assert 2.0 * abs(c2) == pytest.approx(contour_curvature_at_origin(coeffs),
                                          rel=0.05)


def test_nondegenerate_pump_contours(profile_fig1):
    zd = design_zero_dispersion_frequency(profile_fig1)
    pump = PumpPair.symmetric(zd, 0.05 * zd, power_each_w=0.0,
                              gamma_w_m=GAMMA)
    window = _window_about_zd(profile_fig1, zd)
    contours = trace_contours(profile_fig1, pump, window, window, grid=500)
    labels = {c.branch_label.rsplit("-", 1)[0] for c in contours}
    assert "trivial" in labels
    trivial = [c for c in contours if c.branch_label.startswith("trivial")]
    assert len(trivial) == 2, "two analytic trivial lines for distinct pumps"
    assert _closed_nontrivial(contours), "closed non-trivial loop expected"


def test_power_splitting_labels_and_region(profile_fig1):
    zd = design_zero_dispersion_frequency(profile_fig1)
    window = _window_about_zd(profile_fig1, zd, factor=0.5)

    pump = PumpPair.degenerate(zd, power_w=400.0, gamma_w_m=GAMMA)
    contours = trace_contours(profile_fig1, pump, window, window, grid=260)
    split = [c for c in contours if c.branch_label.startswith("power-split")]
    assert split, "trivial lineage must relabel as power-split at high power"

    # The split branches live where the zero-power mismatch is positive
    # (the modulation-instability side): on the branch the dispersive
    # mismatch exactly balances the positive nonlinear term.
    cold_pump = PumpPair.degenerate(zd, power_w=0.0, gamma_w_m=GAMMA)
    for contour in split:
        cold = delta_k_cw(profile_fig1, cold_pump,
                          contour.vertices[:, 0], contour.vertices[:, 1])
        frac_positive = np.mean(cold > 0.0)
        assert frac_positive > 0.95, (contour.branch_label, frac_positive)


def test_trace_deterministic(profile_fig1):
    zd = design_zero_dispersion_frequency(profile_fig1)
    pump = PumpPair.degenerate(zd)
    window = _window_about_zd(profile_fig1, zd, factor=0.4)
    first = trace_contours(profile_fig1, pump, window, window, grid=200)
    second = trace_contours(profile_fig1, pump, window, window, grid=200)
    assert len(first) == len(second)
    for a, b in zip(first, second):
        assert a.branch_label == b.branch_label
        assert np.array_equal(a.vertices, b.vertices)
