"""Analytic pair-source counting model.

Rates follow the standard Poissonian bookkeeping for a two-arm pair source:

    R      pair generation rate (linear in pump power)
    t_i    arm transmission: heralding * channel loss * detector efficiency
    S_i    singles  = R t_i + dark_i
    C      true coincidences = R t_a t_b
    A      accidentals = S_a S_b * window

Arm a is the 810 nm signal arm, arm b the 1550 nm idler arm; the source
carries one heralding efficiency per arm. All rates in Hz, times in s,
pump power in mW (the one deliberately non-SI unit, matching how pump
levels are quoted).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .photonics import Wavelength

DEFAULT_WINDOW = 900e-12  # s
DEFAULT_PUMP_MW = 125.0


@dataclass(frozen=True)
class SourceSpec:
    """Pair source parameters.

    ``pair_rate_per_mw`` is the primary generation-rate figure (pairs/s/mW).
    ``spectral_brightness`` (pairs/s/mW/Hz) and ``bandwidth`` (Hz) are kept
    as metadata; their product is an alternative rate estimate that is not
    forced to agree with the primary figure.
    """

    pair_rate_per_mw: float
    spectral_brightness: float = 0.0
    bandwidth: float = 0.0
    heralding_810: float = 1.0
    heralding_1550: float = 1.0
    intrinsic_pol_error: float = 0.0

    def __post_init__(self):
        if self.pair_rate_per_mw < 0 or self.spectral_brightness < 0:
            raise ValueError("rates must be non-negative")
        if self.bandwidth < 0:
            raise ValueError("bandwidth must be non-negative")
        for name in ("heralding_810", "heralding_1550", "intrinsic_pol_error"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be a probability, got {v}")


@dataclass(frozen=True)
class ChannelSpec:
    """One collection-and-detection arm."""

    wavelength: Wavelength
    loss_db: float = 0.0
    detector_efficiency: float = 1.0
    dark_rate: float = 0.0  # Hz
    jitter_sigma: float = 0.0  # s

    def __post_init__(self):
        if self.loss_db < 0:
            raise ValueError("loss_db must be non-negative")
        if not 0.0 <= self.detector_efficiency <= 1.0:
            raise ValueError("detector_efficiency must be a probability")
        if self.dark_rate < 0 or self.jitter_sigma < 0:
            raise ValueError("dark_rate and jitter_sigma must be non-negative")


@dataclass(frozen=True)
class CountModel:
    """Singles/coincidence/accidental rates at one operating point."""

    pair_rate: float
    singles_a: float
    singles_b: float
    true_coinc: float
    accidental: float
    mu_per_window: float
    window: float

    def __post_init__(self):
        for name in (
            "pair_rate",
            "singles_a",
            "singles_b",
            "true_coinc",
            "accidental",
            "mu_per_window",
            "window",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    @property
    def total_coinc(self) -> float:
        return self.true_coinc + self.accidental

    @property
    def accidental_share(self) -> float:
        """Accidentals as a fraction of all coincidences."""
        tot = self.total_coinc
        if tot == 0:
            raise ValueError("no coincidences; share undefined")
        return self.accidental / tot


def pair_rate(source: SourceSpec, pump_mw: float) -> float:
    """Generated pairs per second at the given pump power."""
    if pump_mw < 0:
        raise ValueError("pump power must be non-negative")
    return source.pair_rate_per_mw * pump_mw


def spectral_pair_rate(source: SourceSpec, pump_mw: float) -> float:
    """Alternative rate from spectral brightness x bandwidth (metadata route)."""
    if pump_mw < 0:
        raise ValueError("pump power must be non-negative")
    return source.spectral_brightness * source.bandwidth * pump_mw


def arm_transmission(channel: ChannelSpec, heralding: float) -> float:
    """End-to-end detection probability for one photon of a pair."""
    if not 0.0 <= heralding <= 1.0:
        raise ValueError("heralding must be a probability")
    return heralding * 10.0 ** (-channel.loss_db / 10.0) * channel.detector_efficiency


def count_model(
    source: SourceSpec,
    ch_a: ChannelSpec,
    ch_b: ChannelSpec,
    pump_mw: float = DEFAULT_PUMP_MW,
    window: float = DEFAULT_WINDOW,
) -> CountModel:
    """Analytic rates for one operating point.

    ch_a is the signal (810 nm) arm and uses heralding_810; ch_b is the
    idler (1550 nm) arm with heralding_1550.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    r = pair_rate(source, pump_mw)
    t_a = arm_transmission(ch_a, source.heralding_810)
    t_b = arm_transmission(ch_b, source.heralding_1550)
    singles_a = r * t_a + ch_a.dark_rate
    singles_b = r * t_b + ch_b.dark_rate
    return CountModel(
        pair_rate=r,
        singles_a=singles_a,
        singles_b=singles_b,
        true_coinc=r * t_a * t_b,
        accidental=singles_a * singles_b * window,
        mu_per_window=r * window,
        window=window,
    )


def car(model: CountModel, true_over_accidental: bool = False) -> float:
    """Coincidence-to-accidental ratio.

    Default convention counts the accidentals among the coincidences,
    CAR = (C + A)/A, consistent with quoting accidentals as a share of all
    coincidences. ``true_over_accidental`` switches to C/A. Zero accidentals
    give math.inf.
    """
    if model.accidental == 0.0:
        return math.inf
    ratio = model.true_coinc / model.accidental
    return ratio if true_over_accidental else ratio + 1.0


# --- lab presets ---------------------------------------------------------------

SIGNAL_NM = 810.0
IDLER_NM = 1550.0


def si_apd_channel(loss_db: float = 0.0, jitter_sigma: float = 0.0) -> ChannelSpec:
    """810 nm silicon APD arm: 60% efficiency, 200 Hz darks."""
    return ChannelSpec(
        wavelength=Wavelength.from_nm(SIGNAL_NM),
        loss_db=loss_db,
        detector_efficiency=0.60,
        dark_rate=200.0,
        jitter_sigma=jitter_sigma,
    )


def snspd_channel(loss_db: float = 0.0, jitter_sigma: float = 0.0) -> ChannelSpec:
    """1550 nm SNSPD arm: 80% efficiency, 50 Hz darks."""
    return ChannelSpec(
        wavelength=Wavelength.from_nm(IDLER_NM),
        loss_db=loss_db,
        detector_efficiency=0.80,
        dark_rate=50.0,
        jitter_sigma=jitter_sigma,
    )


def table_source() -> SourceSpec:
    """Source at the tabulated generation rate of 1.4e5 pairs/s/mW.

    Spectral metadata 4.8e3 pairs/s/mW/GHz over 287 GHz is retained;
    the product disagrees with the tabulated rate by roughly 10x and is
    deliberately not reconciled.
    """
    return SourceSpec(
        pair_rate_per_mw=1.4e5,
        spectral_brightness=4.8e3 / 1e9,
        bandwidth=287e9,
        heralding_810=0.55,
        heralding_1550=0.48,
        intrinsic_pol_error=0.0025,
    )


def car_anchor_source() -> SourceSpec:
    """Source tuned so accidentals are 1.1% of coincidences at 125 mW.

    Dark-free, the accidental share is mu/(1+mu) with mu = R*window,
    independent of arm transmissions, so the share pins the generation
    rate: R_per_mW = (s/(1-s)) / (125 mW * 900 ps) with s = 0.011.
    """
    share = 0.011
    rate = share / (1.0 - share) / (DEFAULT_PUMP_MW * DEFAULT_WINDOW)
    return SourceSpec(
        pair_rate_per_mw=rate,
        spectral_brightness=4.8e3 / 1e9,
        bandwidth=287e9,
        heralding_810=0.55,
        heralding_1550=0.48,
        intrinsic_pol_error=0.0025,
    )
