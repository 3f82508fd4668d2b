"""Exception hierarchy.

Exit-code mapping used by the command-line layer:

* :class:`NumericError`  -> exit code 1 (a computation failed to converge or
  hit a numerical singularity),
* :class:`ConfigError`   -> exit code 2 (the run configuration is malformed
  or internally inconsistent),
* :class:`DomainError`   -> exit code 3 (inputs are outside the physical /
  validity domain of the model).
"""

from __future__ import annotations


class SfwmError(Exception):
    """Base class for all package errors."""


class NumericError(SfwmError):
    """A numerical procedure failed (no bracket, no convergence, singularity)."""


class ConfigError(SfwmError):
    """A run configuration or input specification is invalid."""


class DomainError(SfwmError):
    """Inputs fall outside the validity domain of the physical model."""


class ValidityWindowError(DomainError):
    """A wavelength/frequency lies outside the material model's fitted window."""


class ModeSolveError(NumericError):
    """The guided-mode eigenvalue search failed to bracket a root."""


class TruncatedSpectrumError(DomainError):
    """A spectral feature is cut off by the evaluation window edge."""


class SingularCurvatureError(NumericError):
    """Contour curvature is undefined because the third-order dispersion vanishes."""


class PumpSpecError(ConfigError):
    """A multi-line pump specification is inconsistent (overlap, sum rule, ...)."""


class ResolutionError(ConfigError):
    """A grid is too coarse to resolve a requested spectral feature."""


EXIT_CODE_BY_ERROR = (
    (ConfigError, 2),
    (DomainError, 3),
    (NumericError, 1),
    (SfwmError, 1),
)


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the process exit code used by the CLI."""
    for cls, code in EXIT_CODE_BY_ERROR:
        if isinstance(exc, cls):
            return code
    return 1
