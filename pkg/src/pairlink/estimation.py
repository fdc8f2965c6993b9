"""Least-squares fits shared by the analyses: cos^2 fringes, inverse-power
CAR curves, and sinc^2 spectra.

Nonlinear fits are seeded deterministically (linear subproblem or data
heuristics plus a coarse frequency scan) and polished with scipy's
trust-region least squares; visibility is kept inside [0, 1] by a sin^2
reparametrization rather than bound constraints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .photonics import SpectralShape, spectral_density

MAX_EVALS = 500
XTOL = 1e-10


@dataclass(frozen=True)
class FitResult:
    params: dict
    residual_rms: float
    converged: bool
    iterations: int

    def __post_init__(self):
        if self.residual_rms < 0:
            raise ValueError("residual_rms must be non-negative")

    def to_dict(self) -> dict:
        return {
            "params": {k: float(v) for k, v in self.params.items()},
            "residual_rms": float(self.residual_rms),
            "converged": bool(self.converged),
            "iterations": int(self.iterations),
        }


def _rms(r: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(r))))


def _cos_linear_solve(x, y, s):
    """Closed-form LS of y on [1, cos(sx), sin(sx)]; returns coeffs, rms."""
    design = np.column_stack([np.ones_like(x), np.cos(s * x), np.sin(s * x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coef, _rms(design @ coef - y)


def fit_cos2(x, y, scale=None) -> FitResult:
    """Fit y = A (1 + V cos(s x + phi)) / 2 with V in [0, 1].

    ``scale`` fixes the angular frequency s when known (e.g. 2 for a fringe
    versus analyzer angle); otherwise s is estimated from the data and
    refined. Constant data short-circuits to V = 0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be equal-length 1-d arrays")
    if x.size < 8:
        raise ValueError("need at least 8 points")
    order = np.argsort(x)
    x, y = x[order], y[order]

    mean = float(np.mean(y))
    if np.ptp(y) <= 1e-12 * max(1.0, abs(mean)):
        return FitResult(
            params={
                "amplitude": 2.0 * mean,
                "visibility": 0.0,
                "phase": 0.0,
                "scale": float(scale) if scale is not None else 0.0,
            },
            residual_rms=_rms(y - mean),
            converged=True,
            iterations=0,
        )

    if scale is not None:
        candidates = [float(scale)]
    else:
        span = x[-1] - x[0]
        dx = np.diff(x)
        candidates = []
        if np.allclose(dx, dx[0], rtol=1e-6, atol=0.0):
            spec = np.abs(np.fft.rfft(y - mean))
            if spec.size > 1:
                k = 1 + int(np.argmax(spec[1:]))
                base = 2.0 * np.pi / (x.size * dx[0])
                candidates = [k * base]
                if k > 1:
                    candidates.append((k - 1) * base)
                candidates.append((k + 1) * base)
        if not candidates:
            nyquist = np.pi / np.median(dx)
            candidates = list(
                np.linspace(2.0 * np.pi / (4.0 * span), nyquist, 128)
            )

    best = None
    for s in candidates:
        coef, rms = _cos_linear_solve(x, y, s)
        if best is None or rms < best[2]:
            best = (s, coef, rms)
    s0, (c0, c1, c2), _ = best

    amp0 = max(2.0 * c0, 1e-12 * max(abs(mean), 1.0))
    v0 = np.clip(2.0 * np.hypot(c1, c2) / amp0, 0.0, 1.0)
    phi0 = np.arctan2(-c2, c1)
    u0 = np.arcsin(np.sqrt(v0)) if v0 < 1.0 else 0.5 * np.pi

    fit_scale = scale is None

    def unpack(p):
        a, u, phi = p[0], p[1], p[2]
        s = p[3] if fit_scale else float(scale)
        return a, np.sin(u) ** 2, phi, s

    def residual(p):
        a, v, phi, s = unpack(p)
        return 0.5 * a * (1.0 + v * np.cos(s * x + phi)) - y

    p0 = [amp0, u0, phi0] + ([s0] if fit_scale else [])
    res = least_squares(
        residual, p0, xtol=XTOL, ftol=1e-14, gtol=1e-14, max_nfev=MAX_EVALS
    )
    a, v, phi, s = unpack(res.x)
    if a < 0:  # flip the degenerate sign pair (A, phi+pi)
        a, phi = -a, phi + np.pi
    phi = float(np.mod(phi, 2.0 * np.pi))
    if phi >= 2.0 * np.pi:  # np.mod(-eps, 2pi) can round up to 2pi
        phi = 0.0
    return FitResult(
        params={
            "amplitude": float(a),
            "visibility": float(v),
            "phase": phi,
            "scale": float(s),
        },
        residual_rms=_rms(res.fun),
        converged=bool(res.status > 0),
        iterations=int(res.nfev),
    )


def fit_inverse_power(p, car, baseline=None) -> FitResult:
    """Closed-form LS fit of CAR = k/P + baseline on a power grid.

    ``baseline`` pins the floor (1 reproduces the dark-free model exactly);
    left free it is fitted as a second linear coefficient.
    """
    p = np.asarray(p, dtype=float)
    y = np.asarray(car, dtype=float)
    if p.shape != y.shape or p.ndim != 1:
        raise ValueError("p and car must be equal-length 1-d arrays")
    if p.size < 3:
        raise ValueError("need at least 3 points")
    if np.any(p <= 0):
        raise ValueError("all powers must be positive")
    inv = 1.0 / p
    if baseline is None:
        design = np.column_stack([inv, np.ones_like(inv)])
        (k, b), *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = design @ [k, b] - y
    else:
        b = float(baseline)
        k = float(inv @ (y - b) / (inv @ inv))
        resid = k * inv + b - y
    return FitResult(
        params={"k": float(k), "baseline": float(b)},
        residual_rms=_rms(resid),
        converged=True,
        iterations=1,
    )


def fit_sinc2(wavelengths, intensities) -> FitResult:
    """Fit I = amplitude * sinc^2 profile; center/fwhm in the input's units.

    The model curve is the photonics spectral_density evaluated on the
    wavelength axis, so the fitted fwhm is the profile's true half-maximum
    width.
    """
    x = np.asarray(wavelengths, dtype=float)
    y = np.asarray(intensities, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("wavelengths and intensities must match")
    if x.size < 16:
        raise ValueError("need at least 16 points covering the main lobe")
    order = np.argsort(x)
    x, y = x[order], y[order]

    i_pk = int(np.argmax(y))
    center0 = x[i_pk]
    amp0 = float(y[i_pk])
    if amp0 <= 0:
        raise ValueError("intensities must have a positive peak")

    half = 0.5 * amp0
    above = y >= half
    idx = np.nonzero(above)[0]
    span = x[-1] - x[0]
    if idx.size >= 2 and x[idx[-1]] > x[idx[0]]:
        fwhm0 = x[idx[-1]] - x[idx[0]]
    else:
        fwhm0 = 0.25 * span

    def residual(p):
        center, fwhm, amp = p
        shape = SpectralShape(center, fwhm, "sinc2")
        return amp * spectral_density(shape, x) - y

    lo = [max(x[0] - span, 1e-12 * max(abs(center0), 1.0)), 1e-9 * span, 0.0]
    hi = [x[-1] + span, 10.0 * span, np.inf]
    res = least_squares(
        residual,
        [center0, max(fwhm0, 2e-9 * span), amp0],
        bounds=(lo, hi),
        xtol=XTOL,
        ftol=1e-14,
        gtol=1e-14,
        max_nfev=MAX_EVALS,
    )
    center, fwhm, amp = res.x
    return FitResult(
        params={
            "center": float(center),
            "fwhm": float(fwhm),
            "amplitude": float(amp),
        },
        residual_rms=_rms(res.fun),
        converged=bool(res.status > 0),
        iterations=int(res.nfev),
    )
