"""Asymptotic BBM92 secret-key-rate model on the pair-source link.

QBER combines the intrinsic polarization error on true coincidences with
accidental coincidences as pure 50% noise:

    qber = (e_int * C + A/2) / (C + A)

and the key rate is the asymptotic entanglement-based BB84 form

    skr = max(0, sifting * (C + A) * (1 - f h(qber_z) - h(qber_x)))

with error-correction inefficiency f >= 1. Multi-pair emission enters
through the accidental term (mu-driven), which is what drags the Z-basis
error up with pump power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq, minimize_scalar

from .pairstats import (
    ChannelSpec,
    SourceSpec,
    count_model,
    si_apd_channel,
    snspd_channel,
    table_source,
)

DEFAULT_EC_EFFICIENCY = 1.1
DEFAULT_SIFTING = 0.5

# intrinsic error per basis from the fringe visibilities (1 - V)/2
ERROR_Z_HV = 0.0025  # V = 99.5% in H/V
ERROR_X_DA = 0.0035  # V = 99.3% in D/A


@dataclass(frozen=True)
class LinkSpec:
    """Full link: source, both arms, window and post-processing factors.

    ``intrinsic_error_z``/``_x`` default to the source's polarization error
    for both bases; the presets split them per the measured H/V and D/A
    visibilities.
    """

    source: SourceSpec
    ch_signal: ChannelSpec
    ch_idler: ChannelSpec
    window: float = 900e-12
    ec_efficiency: float = DEFAULT_EC_EFFICIENCY
    sifting_factor: float = DEFAULT_SIFTING
    intrinsic_error_z: float = None
    intrinsic_error_x: float = None

    def __post_init__(self):
        if self.window <= 0:
            raise ValueError("window must be positive")
        if self.ec_efficiency < 1.0:
            raise ValueError("ec_efficiency must be >= 1")
        if not 0.0 < self.sifting_factor <= 1.0:
            raise ValueError("sifting_factor must be in (0, 1]")
        for name in ("intrinsic_error_z", "intrinsic_error_x"):
            if getattr(self, name) is None:
                object.__setattr__(self, name, self.source.intrinsic_pol_error)
            v = getattr(self, name)
            if not 0.0 <= v <= 0.5:
                raise ValueError(f"{name} must be in [0, 0.5]")


@dataclass(frozen=True)
class KeyRatePoint:
    pump_mw: float
    sifted_rate: float
    qber_z: float
    qber_x: float
    skr: float


@dataclass(frozen=True)
class PumpSweepResult:
    points: list
    p_opt: float
    skr_opt: float
    p_at_qberz_5pct: float  # None when the grid never crosses 5%


def hybrid_link() -> LinkSpec:
    """Hybrid 30 dB link: 15 dB free-space signal arm, 15 dB fiber idler arm,
    900 ps window, tabulated source rate, lab detectors."""
    return LinkSpec(
        source=table_source(),
        ch_signal=si_apd_channel(loss_db=15.0),
        ch_idler=snspd_channel(loss_db=15.0),
        window=900e-12,
        ec_efficiency=DEFAULT_EC_EFFICIENCY,
        sifting_factor=DEFAULT_SIFTING,
        intrinsic_error_z=ERROR_Z_HV,
        intrinsic_error_x=ERROR_X_DA,
    )


def binary_entropy(x: float) -> float:
    """Shannon entropy of a bit, h(x) in bits; h(0) = h(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary_entropy needs x in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def link_qber(link: LinkSpec, pump_mw: float):
    """(qber_z, qber_x, CountModel) at one pump power."""
    model = count_model(
        link.source, link.ch_signal, link.ch_idler, pump_mw, link.window
    )
    total = model.true_coinc + model.accidental
    if total == 0.0:
        raise ValueError("zero total coincidences; QBER undefined")

    def qber(e_int):
        return (e_int * model.true_coinc + 0.5 * model.accidental) / total

    return qber(link.intrinsic_error_z), qber(link.intrinsic_error_x), model


def secret_key_rate(link: LinkSpec, pump_mw: float) -> KeyRatePoint:
    qz, qx, model = link_qber(link, pump_mw)
    sifted = link.sifting_factor * (model.true_coinc + model.accidental)
    fraction = 1.0 - link.ec_efficiency * binary_entropy(qz) - binary_entropy(qx)
    return KeyRatePoint(
        pump_mw=pump_mw,
        sifted_rate=sifted,
        qber_z=qz,
        qber_x=qx,
        skr=max(0.0, sifted * fraction),
    )


def _refine_p_opt(link: LinkSpec, lo: float, hi: float) -> float:
    res = minimize_scalar(
        lambda p: -secret_key_rate(link, p).skr,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-3},
    )
    return float(res.x)


def pump_sweep(
    link: LinkSpec, p_min: float, p_max: float, n: int = 64
) -> PumpSweepResult:
    """Evaluate the key rate on a pump grid and locate the optimum.

    p_opt is the grid argmax refined by a bounded scalar search between its
    grid neighbors. p_at_qberz_5pct is the lowest-power crossing of
    qber_z = 5%, root-found between the bracketing grid points; None when
    the sweep never reaches 5%.
    """
    if not 0.0 <= p_min < p_max:
        raise ValueError("need 0 <= p_min < p_max")
    if n < 16:
        raise ValueError("need at least 16 grid points")
    step = (p_max - p_min) / (n - 1)
    grid = [p_min + i * step for i in range(n)]
    if grid[0] == 0.0:
        grid[0] = min(1e-6, 0.5 * step)  # avoid the degenerate zero-power point
    points = [secret_key_rate(link, p) for p in grid]

    skrs = [pt.skr for pt in points]
    i_best = max(range(n), key=skrs.__getitem__)
    if skrs[i_best] == 0.0:
        raise ValueError("secret key rate vanishes on the whole grid")
    lo = grid[max(i_best - 1, 0)]
    hi = grid[min(i_best + 1, n - 1)]
    p_opt = _refine_p_opt(link, lo, hi)
    skr_opt = secret_key_rate(link, p_opt).skr
    if skr_opt < skrs[i_best]:  # refinement must never lose to the grid
        p_opt, skr_opt = grid[i_best], skrs[i_best]

    p_cross = None
    for k in range(n - 1):
        if points[k].qber_z < 0.05 <= points[k + 1].qber_z:
            p_cross = brentq(
                lambda p: link_qber(link, p)[0] - 0.05,
                grid[k],
                grid[k + 1],
                xtol=1e-9,
            )
            break
    if p_cross is None and points[0].qber_z >= 0.05:
        p_cross = grid[0]

    return PumpSweepResult(
        points=points,
        p_opt=p_opt,
        skr_opt=skr_opt,
        p_at_qberz_5pct=p_cross,
    )
