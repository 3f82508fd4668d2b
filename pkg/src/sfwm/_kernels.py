"""Hot numerical kernels: numba-compiled lane with a pure-numpy/python fallback.

Lane selection happens at import time: the compiled lane is used when numba
imports successfully *and* the environment variable ``SFWM_NO_NUMBA`` is unset
or empty.  Both lanes perform identical IEEE operations in identical order
(``fastmath`` stays off), so their outputs agree to the last bit on the same
platform; a parity test suite enforces agreement.

Kernels
-------
* :func:`phase_matched_amplitude` - complex emission amplitude
  ``sinc(L dk / 2) * exp(i L dk / 2)`` over an array of wavevector mismatches.
* :func:`gaussian_ridge` - unit-area Gaussian profile (energy-conservation
  ridge rendering).
* :func:`contour_segments` - marching-squares zero-level segment extraction
  over a sampled 2-D field.
"""

from __future__ import annotations

import os

import numpy as np

ENV_DISABLE_FLAG = "SFWM_NO_NUMBA"

_numba = None
if not os.environ.get(ENV_DISABLE_FLAG):
    try:  # pragma: no cover - exercised via the env-flag parity tests
        import numba as _numba
    except ImportError:  # pragma: no cover
        _numba = None


def active_lane() -> str:
    """Which implementation lane is live: ``"numba"`` or ``"numpy"``."""
    return "numba" if _numba is not None else "numpy"


# --------------------------------------------------------------------------------------
# phase-matched amplitude
# --------------------------------------------------------------------------------------

def _amplitude_numpy(dk: np.ndarray, length_m: float) -> np.ndarray:
    x = 0.5 * length_m * dk
    # sin(x)/x with the removable singularity filled; written exactly like the
    # compiled lane so both produce identical floats.
    safe = np.where(x == 0.0, 1.0, x)
    s = np.where(x == 0.0, 1.0, np.sin(safe) / safe)
    return s * (np.cos(x) + 1j * np.sin(x))


if _numba is not None:

    @_numba.njit(cache=True, fastmath=False)
    def _amplitude_numba(dk, length_m):  # pragma: no cover - compiled
        out = np.empty(dk.shape, dtype=np.complex128)
        flat_in = dk.ravel()
        flat_out = out.ravel()
        for i in range(flat_in.size):
            x = 0.5 * length_m * flat_in[i]
            if x == 0.0:
                s = 1.0
            else:
                s = np.sin(x) / x
            flat_out[i] = s * complex(np.cos(x), np.sin(x))
        return out


def phase_matched_amplitude(dk, length_m: float) -> np.ndarray:
    """Complex amplitude ``sinc(L dk/2) exp(i L dk/2)`` (mathematical sinc)."""
    dk = np.ascontiguousarray(np.asarray(dk, dtype=float))
    if _numba is not None:
        return _amplitude_numba(dk, float(length_m))
    return _amplitude_numpy(dk, float(length_m))


# --------------------------------------------------------------------------------------
# unit-area Gaussian ridge
# --------------------------------------------------------------------------------------

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)


def _ridge_numpy(x: np.ndarray, center: float, sigma: float) -> np.ndarray:
    t = (x - center) / sigma
    return (_INV_SQRT_2PI / sigma) * np.exp(-0.5 * t * t)


if _numba is not None:

    @_numba.njit(cache=True, fastmath=False)
    def _ridge_numba(x, center, sigma):  # pragma: no cover - compiled
        out = np.empty(x.shape, dtype=np.float64)
        flat_in = x.ravel()
        flat_out = out.ravel()
        c = _INV_SQRT_2PI / sigma
        for i in range(flat_in.size):
            t = (flat_in[i] - center) / sigma
            flat_out[i] = c * np.exp(-0.5 * t * t)
        return out


def gaussian_ridge(x, center: float, sigma: float) -> np.ndarray:
    """Unit-area Gaussian, ``integral dx = 1``."""
    if sigma <= 0.0:
        raise ValueError("ridge width must be positive")
    x = np.ascontiguousarray(np.asarray(x, dtype=float))
    if _numba is not None:
        return _ridge_numba(x, float(center), float(sigma))
    return _ridge_numpy(x, float(center), float(sigma))


# --------------------------------------------------------------------------------------
# marching squares (zero level)
# --------------------------------------------------------------------------------------

def mixed_cells(field: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Indices (row, col) of grid cells whose corner signs are not uniform.

    NaN corners never register as mixed, so invalid regions are skipped.
    """
    with np.errstate(invalid="ignore"):
        pos = field >= 0.0
    valid = np.isfinite(field)
    a = pos[:-1, :-1]
    b = pos[:-1, 1:]
    c = pos[1:, 1:]
    d = pos[1:, :-1]
    ok = valid[:-1, :-1] & valid[:-1, 1:] & valid[1:, 1:] & valid[1:, :-1]
    mixed = ok & ~((a == b) & (b == c) & (c == d))
    ii, jj = np.nonzero(mixed)
    return ii.astype(np.int64), jj.astype(np.int64)


def _segments_core(field, xs, ys, ii, jj, out):
    """Shared marching-squares case logic; fills ``out`` and returns the count.

    Corner layout for cell (i, j) (row i = y index, column j = x index)::

        a = F[i, j]     --- top-left     (xs[j],   ys[i])
        b = F[i, j+1]   --- top-right    (xs[j+1], ys[i])
        c = F[i+1, j+1] --- bottom-right (xs[j+1], ys[i+1])
        d = F[i+1, j]   --- bottom-left  (xs[j],   ys[i+1])
    """
    n = 0
    for m in range(ii.shape[0]):
        i = ii[m]
        j = jj[m]
        va = field[i, j]
        vb = field[i, j + 1]
        vc = field[i + 1, j + 1]
        vd = field[i + 1, j]
        x0 = xs[j]
        x1 = xs[j + 1]
        y0 = ys[i]
        y1 = ys[i + 1]

        # Edge zero crossings (linear interpolation).
        # top: a-b, right: b-c, bottom: d-c, left: a-d
        txx = x0 + (x1 - x0) * (va / (va - vb)) if (va >= 0.0) != (vb >= 0.0) else 0.0
        ryy = y0 + (y1 - y0) * (vb / (vb - vc)) if (vb >= 0.0) != (vc >= 0.0) else 0.0
        bxx = x0 + (x1 - x0) * (vd / (vd - vc)) if (vd >= 0.0) != (vc >= 0.0) else 0.0
        lyy = y0 + (y1 - y0) * (va / (va - vd)) if (va >= 0.0) != (vd >= 0.0) else 0.0

        idx = 0
        if va >= 0.0:
            idx += 1
        if vb >= 0.0:
            idx += 2
        if vc >= 0.0:
            idx += 4
        if vd >= 0.0:
            idx += 8

        if idx == 1 or idx == 14:      # corner a isolated: top-left
            out[n, 0] = txx; out[n, 1] = y0; out[n, 2] = x0; out[n, 3] = lyy
            n += 1
        elif idx == 2 or idx == 13:    # corner b isolated: top-right
            out[n, 0] = txx; out[n, 1] = y0; out[n, 2] = x1; out[n, 3] = ryy
            n += 1
        elif idx == 4 or idx == 11:    # corner c isolated: bottom-right
            out[n, 0] = x1; out[n, 1] = ryy; out[n, 2] = bxx; out[n, 3] = y1
            n += 1
        elif idx == 8 or idx == 7:     # corner d isolated: bottom-left
            out[n, 0] = bxx; out[n, 1] = y1; out[n, 2] = x0; out[n, 3] = lyy
            n += 1
        elif idx == 3 or idx == 12:    # horizontal split: left-right
            out[n, 0] = x0; out[n, 1] = lyy; out[n, 2] = x1; out[n, 3] = ryy
            n += 1
        elif idx == 6 or idx == 9:     # vertical split: top-bottom
            out[n, 0] = txx; out[n, 1] = y0; out[n, 2] = bxx; out[n, 3] = y1
            n += 1
        elif idx == 5 or idx == 10:    # saddle: disambiguate with the center value
            center = 0.25 * (va + vb + vc + vd)
            cpos = center >= 0.0
            # the sign channel matching the center connects its two diagonal
            # corners; the other two corners are isolated
            if (idx == 5 and cpos) or (idx == 10 and not cpos):
                # pair (top, right) and (bottom, left)
                out[n, 0] = txx; out[n, 1] = y0; out[n, 2] = x1; out[n, 3] = ryy
                n += 1
                out[n, 0] = bxx; out[n, 1] = y1; out[n, 2] = x0; out[n, 3] = lyy
                n += 1
            else:
                # pair (top, left) and (bottom, right)
                out[n, 0] = txx; out[n, 1] = y0; out[n, 2] = x0; out[n, 3] = lyy
                n += 1
                out[n, 0] = x1; out[n, 1] = ryy; out[n, 2] = bxx; out[n, 3] = y1
                n += 1
    return n


if _numba is not None:
    _segments_compiled = _numba.njit(cache=True, fastmath=False)(_segments_core)


def contour_segments(field, xs, ys, exclude_cells: np.ndarray | None = None) -> np.ndarray:
    """Zero-level segments of ``field`` sampled at ``(xs[j], ys[i])``.

    Returns an array of shape (n, 4): columns x1, y1, x2, y2, in deterministic
    row-major cell order.  NaN cells are skipped; ``exclude_cells`` (boolean,
    shape (len(ys)-1, len(xs)-1)) drops additional cells from the pass.
    """
    field = np.ascontiguousarray(np.asarray(field, dtype=float))
    xs = np.ascontiguousarray(np.asarray(xs, dtype=float))
    ys = np.ascontiguousarray(np.asarray(ys, dtype=float))
    if field.shape != (ys.size, xs.size):
        raise ValueError("field shape must be (len(ys), len(xs))")
    ii, jj = mixed_cells(field)
    if exclude_cells is not None:
        if exclude_cells.shape != (ys.size - 1, xs.size - 1):
            raise ValueError("exclude_cells shape must be (len(ys)-1, len(xs)-1)")
        keep = ~exclude_cells[ii, jj]
        ii, jj = ii[keep], jj[keep]
    out = np.empty((2 * ii.size, 4), dtype=float)
    if _numba is not None:
        n = _segments_compiled(field, xs, ys, ii, jj, out)
    else:
        n = _segments_core(field, xs, ys, ii, jj, out)
    return out[:n]
