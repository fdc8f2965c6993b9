"""Energy-time entanglement: Franson feasibility and fringe model.

The two unbalanced interferometers share a free spectral range (FSR);
the arm-length delay is 1/FSR. Interference of the post-selected central
peak needs that delay to exceed the single-photon coherence time while
staying below the pump coherence time. Coherence times are taken as
1/bandwidth with no shape factors; the margins in play are large enough
(>40x) that the convention cannot flip a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FransonConfig:
    fsr: float  # Hz
    photon_bandwidth: float  # Hz
    pump_linewidth: float  # Hz
    visibility: float = 1.0
    phase_per_volt: float = 0.0  # rad/V
    phase_offset: float = 0.0  # rad

    def __post_init__(self):
        if self.fsr <= 0:
            raise ValueError("fsr must be positive")
        if self.photon_bandwidth <= 0 or self.pump_linewidth <= 0:
            raise ValueError("bandwidths must be positive")
        if not 0.0 <= self.visibility <= 1.0:
            raise ValueError("visibility must be in [0, 1]")


@dataclass(frozen=True)
class FeasibilityReport:
    delay: float  # s
    photon_coherence: float  # s
    pump_coherence: float  # s
    passes: bool


def default_config() -> FransonConfig:
    """Deployed interferometer pair: 2.5 GHz FSR, ~100 GHz photons,
    few-kHz pump, 99.1% visibility, one fringe per 10 V of piezo drive."""
    return FransonConfig(
        fsr=2.5e9,
        photon_bandwidth=100e9,
        pump_linewidth=5e3,
        visibility=0.991,
        phase_per_volt=2.0 * np.pi / 10.0,
        phase_offset=0.0,
    )


def franson_feasibility(cfg: FransonConfig) -> FeasibilityReport:
    """Check photon_coherence < delay < pump_coherence (strict)."""
    delay = 1.0 / cfg.fsr
    photon = 1.0 / cfg.photon_bandwidth
    pump = 1.0 / cfg.pump_linewidth
    return FeasibilityReport(
        delay=delay,
        photon_coherence=photon,
        pump_coherence=pump,
        passes=photon < delay < pump,
    )


def franson_fringe(cfg: FransonConfig, phi_sum):
    """Relative coincidence rate (1/4)(1 + V cos(phi_sum + phase_offset)).

    The 1/4 is the central-peak post-selection share; only relative rates
    matter for visibility. Accepts scalars or arrays.
    """
    phi = np.asarray(phi_sum, dtype=float)
    rate = 0.25 * (1.0 + cfg.visibility * np.cos(phi + cfg.phase_offset))
    return float(rate) if np.isscalar(phi_sum) else rate


def fringe_vs_voltage(cfg: FransonConfig, voltages):
    """Fringe sampled along the piezo drive, phi_sum = phase_per_volt * V.

    The configured phase_offset enters once, inside franson_fringe."""
    v = np.asarray(voltages, dtype=float)
    return franson_fringe(cfg, cfg.phase_per_volt * v)
