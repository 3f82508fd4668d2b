"""Plot-ready CSV/JSON emission and the run manifest.

Float policy: CSV cells carry 9 significant digits (``%.9g``); JSON floats
are emitted with Python's shortest round-trip representation (up to 17
significant digits).  Non-finite floats become ``null`` in JSON and the
literal strings ``nan``/``inf`` in CSV.  All writers are deterministic:
identical inputs produce byte-identical files (keys sorted, no timestamps).
"""

from __future__ import annotations

import hashlib
import json
import math
import numbers
import os
from typing import Iterable, Sequence

import numpy as np

from ._version import __version__
from .sellmeier import lambda_um_from_omega

__all__ = [
    "CSV_FLOAT_FORMAT",
    "format_csv_value",
    "write_csv",
    "write_json",
    "sha256_of_file",
    "sha256_of_text",
    "write_manifest",
    "singles_table",
    "contour_table",
    "sweep_table",
    "flux_table",
    "joint_spectrum_table",
    "dispersion_table",
]

CSV_FLOAT_FORMAT = "%.9g"


def format_csv_value(value) -> str:
    """One CSV cell: floats at 9 significant digits, strings verbatim."""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, numbers.Integral):
        return str(int(value))
    if isinstance(value, numbers.Real):
        return CSV_FLOAT_FORMAT % float(value)
    raise TypeError(f"unsupported CSV cell type: {type(value)!r}")


def write_csv(path, header: Sequence[str],
              rows: Iterable[Sequence]) -> None:
    """Write a CSV file with a single header line and ``%.9g`` floats."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(", ".join(header) + "\n")
        for row in rows:
            handle.write(", ".join(format_csv_value(v) for v in row) + "\n")


def _json_sanitize(obj):
    """Make an object JSON-safe: arrays to lists, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(key): _json_sanitize(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_sanitize(val) for val in obj]
    if isinstance(obj, np.ndarray):
        return [_json_sanitize(val) for val in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, numbers.Integral):
        return int(obj)
    if isinstance(obj, numbers.Real):
        value = float(obj)
        return value if math.isfinite(value) else None
    if isinstance(obj, numbers.Complex):
        return {"re": _json_sanitize(obj.real), "im": _json_sanitize(obj.imag)}
    return obj


def write_json(path, payload: dict) -> None:
    """Write a JSON file deterministically (sorted keys, two-space indent)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        json.dump(_json_sanitize(payload), handle, indent=2, sort_keys=True,
                  allow_nan=False)
        handle.write("\n")


# --------------------------------------------------------------------------------------
# manifest
# --------------------------------------------------------------------------------------

def sha256_of_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def sha256_of_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_manifest(out_dir, file_names: Sequence[str],
                   config_text: str | None = None) -> str:
    """Emit ``manifest.json`` covering every listed file in ``out_dir``.

    Records the tool version, the sha256 of the config the run was driven
    by, and a sha256 per emitted file.  Returns the manifest path.
    """
    files = {}
    for name in sorted(file_names):
        files[name] = sha256_of_file(os.path.join(out_dir, name))
    payload = {
        "tool": "sfwm",
        "version": __version__,
        "config_sha256": sha256_of_text(config_text)
        if config_text is not None else None,
        "files": files,
    }
    path = os.path.join(out_dir, "manifest.json")
    write_json(path, payload)
    return path


# --------------------------------------------------------------------------------------
# table builders (header, row iterable) pairs
# --------------------------------------------------------------------------------------

def dispersion_table(profile, omega_rad_s: np.ndarray):
    """Propagation constant and its derivatives on a frequency grid."""
    from .sellmeier import SPEED_OF_LIGHT_M_S

    header = ("omega_rad_s", "lambda_um", "n_eff", "k_1_m", "k2_s2_m",
              "k3_s3_m", "k4_s4_m")

    def rows():
        for omega in np.asarray(omega_rad_s, dtype=float):
            k = profile.k(omega)
            yield (omega, lambda_um_from_omega(omega),
                   k * SPEED_OF_LIGHT_M_S / omega, k,
                   profile.k_derivative(omega, 2),
                   profile.k_derivative(omega, 3),
                   profile.k_derivative(omega, 4))

    return header, rows()


def singles_table(spectrum):
    """Single-arm spectrum rows: frequency, wavelength, intensity, amplitude."""
    header = ("omega_rad_s", "lambda_um", "intensity_norm", "amp_re",
              "amp_im")
    intensity = spectrum.intensity

    def rows():
        for omega, inten, amp in zip(spectrum.omega_rad_s, intensity,
                                     spectrum.amplitude):
            yield (omega, lambda_um_from_omega(omega), inten,
                   complex(amp).real, complex(amp).imag)

    return header, rows()


def contour_table(contours):
    """Phase-matching contour vertices, one row per polyline vertex."""
    header = ("branch_label", "omega_s_rad_s", "omega_i_rad_s", "lambda_s_um",
              "lambda_i_um")

    def rows():
        for contour in contours:
            for omega_s, omega_i in contour.vertices:
                yield (contour.branch_label, omega_s, omega_i,
                       lambda_um_from_omega(omega_s),
                       lambda_um_from_omega(omega_i))

    return header, rows()


def sweep_table(sweep_rows):
    """Design-sweep rows; flags are semicolon-joined."""
    header = ("r_um", "f", "lambda_zd_um", "fwhm_main_nm", "bw_inner_sat_nm",
              "bw_outer_sat_nm", "flags")

    def rows():
        for row in sweep_rows:
            yield (row.r_um, row.f,
                   row.lambda_zd_um if row.lambda_zd_um is not None
                   else float("nan"),
                   row.fwhm_main_nm if row.fwhm_main_nm is not None
                   else float("nan"),
                   row.bw_inner_sat_nm if row.bw_inner_sat_nm is not None
                   else float("nan"),
                   row.bw_outer_sat_nm if row.bw_outer_sat_nm is not None
                   else float("nan"),
                   ";".join(row.flags))

    return header, rows()


def flux_table(sweep):
    """Phase-sweep rows: phase against flux normalized to the zero phase."""
    header = ("theta_rad", "flux_norm")
    return header, sweep.rows()


def joint_spectrum_table(spectrum, nonzero_only: bool = True):
    """Joint-spectrum cells; by default skips exactly-zero cells.

    Multi-line pump amplitudes live on a narrow anti-diagonal stripe and the
    dense grid is mostly exact zeros; ``nonzero_only`` keeps files compact
    without losing information (absent cells are zero).
    """
    header = ("omega_s_rad_s", "omega_i_rad_s", "amp_re", "amp_im",
              "intensity")

    def rows():
        amp = spectrum.amplitude
        om_s = spectrum.omega_s_rad_s
        om_i = spectrum.omega_i_rad_s
        for j in range(om_i.size):
            line = amp[j]
            if nonzero_only:
                cols = np.nonzero(line)[0]
            else:
                cols = range(om_s.size)
            for i in cols:
                cell = complex(line[i])
                yield (om_s[i], om_i[j], cell.real, cell.imag,
                       abs(cell) ** 2)

    return header, rows()
