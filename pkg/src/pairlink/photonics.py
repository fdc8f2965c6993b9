"""Wavelength/frequency bookkeeping, Gaussian-beam parameters and spectral shapes.

All quantities are SI internally (meters, hertz, seconds). Interface layers
(CLI, config files) accept nm/GHz/ps and convert at the boundary; nothing in
this module does implicit unit scaling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

C_LIGHT = 299792458.0  # speed of light, m/s

# Argument u > 0 where (sin u / u)^2 = 1/2.  Computed once by root bracketing
# (see tests); accurate to better than 1e-12.
SINC2_HALF_MAX_ARG = 1.39155737825151

_SHAPES = ("sinc2", "gaussian")


def _as_meters(wavelength) -> float:
    """Accept a Wavelength or a plain float in meters."""
    if isinstance(wavelength, Wavelength):
        return wavelength.meters
    return float(wavelength)


@dataclass(frozen=True)
class Wavelength:
    """A vacuum wavelength in meters.

    Use :meth:`from_nm` at interface boundaries; internals stay in meters.
    """

    meters: float

    def __post_init__(self):
        if not self.meters > 0:
            raise ValueError(f"wavelength must be positive, got {self.meters}")

    @classmethod
    def from_nm(cls, nm: float) -> "Wavelength":
        return cls(float(nm) * 1e-9)

    @property
    def nm(self) -> float:
        return self.meters * 1e9

    @property
    def frequency_hz(self) -> float:
        return C_LIGHT / self.meters


@dataclass(frozen=True)
class BeamParams:
    """Gaussian beam focused to ``waist_radius`` at ``wavelength``.

    ``rayleigh_length`` is derived (pi * w^2 / lambda), never passed in.
    """

    waist_radius: float  # 1/e^2 intensity radius at the waist, m
    wavelength: Wavelength
    rayleigh_length: float = field(init=False)

    def __post_init__(self):
        zr = rayleigh_length(self.waist_radius, self.wavelength)
        object.__setattr__(self, "rayleigh_length", zr)


@dataclass(frozen=True)
class SpectralShape:
    """Normalized spectral density: unit peak at ``center_frequency``.

    ``shape`` is either "sinc2" (CW-pumped downconversion marginal) or
    "gaussian"; both are scaled so the full width at half maximum equals
    ``fwhm_bandwidth``.
    """

    center_frequency: float  # Hz
    fwhm_bandwidth: float  # Hz
    shape: str = "sinc2"

    def __post_init__(self):
        if not self.center_frequency > 0:
            raise ValueError("center_frequency must be positive")
        if not self.fwhm_bandwidth > 0:
            raise ValueError("fwhm_bandwidth must be positive")
        if self.shape not in _SHAPES:
            raise ValueError(f"shape must be one of {_SHAPES}, got {self.shape!r}")


def rayleigh_length(waist_radius: float, wavelength) -> float:
    """Rayleigh length z_R = pi * w0^2 / lambda.

    Parameters
    ----------
    waist_radius:
        1/e^2 intensity radius at the waist, m.
    wavelength:
        Wavelength or float in m.

    Returns
    -------
    float
        Distance over which the beam area doubles, m.
    """
    lam = _as_meters(wavelength)
    w = float(waist_radius)
    if not (w > 0 and lam > 0):
        raise ValueError(f"waist_radius and wavelength must be positive, got {w}, {lam}")
    return np.pi * w * w / lam


def spdc_partner_wavelength(pump, signal) -> Wavelength:
    """Idler wavelength from energy conservation 1/lp = 1/ls + 1/li.

    ``signal`` must be longer than ``pump`` (both downconverted photons carry
    less energy than the pump photon); otherwise no partner exists.
    """
    lp = _as_meters(pump)
    ls = _as_meters(signal)
    if not (lp > 0 and ls > 0):
        raise ValueError("wavelengths must be positive")
    if ls <= lp:
        raise ValueError(
            f"signal ({ls} m) must be longer than pump ({lp} m) for an "
            "energy-conserving partner"
        )
    return Wavelength(1.0 / (1.0 / lp - 1.0 / ls))


def bandwidth_lambda_to_nu(delta_lambda: float, center) -> float:
    """Convert a wavelength bandwidth to frequency: |dnu| = c * dlambda / lambda^2.

    First-order conversion; exact edge-frequency differencing differs at the
    (dlambda/lambda)^2 level, far below measurement rounding.
    """
    lam = _as_meters(center)
    dl = float(delta_lambda)
    if not (dl > 0 and lam > 0):
        raise ValueError("bandwidth and center wavelength must be positive")
    return C_LIGHT * dl / (lam * lam)


def bandwidth_nu_to_lambda(delta_nu: float, center) -> float:
    """Inverse of :func:`bandwidth_lambda_to_nu`: dlambda = dnu * lambda^2 / c."""
    lam = _as_meters(center)
    dn = float(delta_nu)
    if not (dn > 0 and lam > 0):
        raise ValueError("bandwidth and center wavelength must be positive")
    return dn * lam * lam / C_LIGHT


def spectral_density(shape: SpectralShape, frequency) -> np.ndarray | float:
    """Evaluate the normalized spectral density at ``frequency`` (Hz).

    Peak value is exactly 1 at ``center_frequency``; the half-maximum points
    sit at center +- fwhm/2 for both shapes. Accepts scalars or arrays.
    """
    nu = np.asarray(frequency, dtype=float)
    x = nu - shape.center_frequency
    if shape.shape == "sinc2":
        # sin(u)/u with u = 2*SINC2_HALF_MAX_ARG * x / fwhm; np.sinc is sin(pi t)/(pi t)
        u = 2.0 * SINC2_HALF_MAX_ARG / shape.fwhm_bandwidth * x
        out = np.sinc(u / np.pi) ** 2
    else:
        out = np.exp(-4.0 * np.log(2.0) * (x / shape.fwhm_bandwidth) ** 2)
    if np.ndim(frequency) == 0:
        return float(out)
    return out
