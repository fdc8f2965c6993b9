"""Run configuration: INI-style key/value file over documented defaults.

Every key has a default mirroring the lab operating point, so an empty (or
absent) file is a valid configuration. Unknown sections or keys are
rejected outright; silent typos in sweep configs have burned enough hours
elsewhere. Seed resolution order: CLI flag, [run] seed, PAIRLINK_SEED
environment variable, then 0.
"""

from __future__ import annotations

import configparser
import math
import os

from . import franson as franson_mod
from .pairstats import DEFAULT_PUMP_MW, DEFAULT_WINDOW, ChannelSpec, SourceSpec
from .photonics import Wavelength
from .qkd import LinkSpec

SEED_ENV_VAR = "PAIRLINK_SEED"

# accidental share 1.1% of coincidences at 125 mW pins this rate (see
# pairstats.car_anchor_source)
_CAR_RATE = 0.011 / 0.989 / (DEFAULT_PUMP_MW * DEFAULT_WINDOW)

DEFAULTS = {
    "source": {
        "pair_rate_per_mw": "1.4e5",
        "spectral_brightness_per_ghz": "4.8e3",
        "bandwidth_ghz": "287",
        "heralding_810": "0.55",
        "heralding_1550": "0.48",
        "intrinsic_error_z": "0.0025",
        "intrinsic_error_x": "0.0035",
    },
    "channel_signal": {
        "wavelength_nm": "810",
        "loss_db": "15",
        "detector_efficiency": "0.6",
        "dark_rate_hz": "200",
        "jitter_sigma_ps": "0",
    },
    "channel_idler": {
        "wavelength_nm": "1550",
        "loss_db": "15",
        "detector_efficiency": "0.8",
        "dark_rate_hz": "50",
        "jitter_sigma_ps": "0",
    },
    "qkd": {
        "window_ps": "900",
        "ec_efficiency": "1.1",
        "sifting_factor": "0.5",
        "p_min_mw": "1",
        "p_max_mw": "2000",
        "n_points": "64",
    },
    "beam": {
        "wavelengths_nm": "532, 810, 1550",
        "waists_um": "200, 145, 140",
    },
    "car": {
        # generation rate tuned so accidentals are 1.1% of coincidences at
        # the 125 mW operating point (the qkd sweep keeps the tabulated rate)
        "pair_rate_per_mw": repr(_CAR_RATE),
        "window_ps": "900",
        "p_min_mw": "5",
        "p_max_mw": "125",
        "n_points": "25",
        "montecarlo_duration_s": "0.2",
        "accidental_offset_ns": "100",
    },
    "franson": {
        "fsr_ghz": "2.5",
        "photon_bandwidth_ghz": "100",
        "pump_linewidth_khz": "5",
        "visibility": "0.991",
        "phase_per_volt": repr(2.0 * math.pi / 10.0),  # rad/V, one fringe per 10 V
        "phase_offset": "0",
        "v_min": "0",
        "v_max": "20",
        "n_points": "81",
    },
    "fringe": {
        "visibility": "0.995",
        "fixed_arm": "D",
        "n_points": "64",
    },
    "run": {
        "seed": "",
        "output_dir": ".",
    },
}


class ConfigError(Exception):
    """Malformed configuration: unknown key, bad value, or bad file."""


class RunConfig:
    """Defaults merged with an optional INI file; strictly validated."""

    def __init__(self, path=None):
        self._values = {s: dict(kv) for s, kv in DEFAULTS.items()}
        if path is not None:
            parser = configparser.ConfigParser(interpolation=None)
            try:
                with open(path) as fh:
                    parser.read_file(fh)
            except OSError as exc:
                raise ConfigError(f"cannot read config file: {exc}") from exc
            except configparser.Error as exc:
                raise ConfigError(f"bad config syntax: {exc}") from exc
            for section in parser.sections():
                if section not in self._values:
                    raise ConfigError(f"unknown config section [{section}]")
                for key, value in parser.items(section):
                    if key not in self._values[section]:
                        raise ConfigError(
                            f"unknown key '{key}' in section [{section}]"
                        )
                    self._values[section][key] = value

    def set(self, section: str, key: str, value) -> None:
        if section not in self._values or key not in self._values[section]:
            raise ConfigError(f"unknown config key [{section}] {key}")
        self._values[section][key] = str(value)

    def get(self, section: str, key: str) -> str:
        return self._values[section][key]

    def getfloat(self, section: str, key: str) -> float:
        raw = self.get(section, key)
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(
                f"[{section}] {key} must be a number, got {raw!r}"
            ) from exc

    def getint(self, section: str, key: str) -> int:
        value = self.getfloat(section, key)
        if value != int(value):
            raise ConfigError(f"[{section}] {key} must be an integer")
        return int(value)

    def getfloats(self, section: str, key: str) -> list:
        raw = self.get(section, key)
        items = [s.strip() for s in raw.split(",") if s.strip()]
        if not items:
            raise ConfigError(f"[{section}] {key} must list at least one number")
        try:
            return [float(s) for s in items]
        except ValueError as exc:
            raise ConfigError(f"[{section}] {key} has a non-numeric entry") from exc

    # --- resolved objects -------------------------------------------------

    def seed(self, override=None) -> int:
        if override is not None:
            return int(override)
        raw = self.get("run", "seed").strip()
        if raw:
            return self.getint("run", "seed")
        env = os.environ.get(SEED_ENV_VAR, "").strip()
        if env:
            try:
                return int(env)
            except ValueError as exc:
                raise ConfigError(
                    f"{SEED_ENV_VAR} must be an integer, got {env!r}"
                ) from exc
        return 0

    def output_dir(self) -> str:
        return self.get("run", "output_dir")

    def _source(self, rate_per_mw: float) -> SourceSpec:
        try:
            return SourceSpec(
                pair_rate_per_mw=rate_per_mw,
                spectral_brightness=self.getfloat("source", "spectral_brightness_per_ghz")
                / 1e9,
                bandwidth=self.getfloat("source", "bandwidth_ghz") * 1e9,
                heralding_810=self.getfloat("source", "heralding_810"),
                heralding_1550=self.getfloat("source", "heralding_1550"),
                intrinsic_pol_error=self.getfloat("source", "intrinsic_error_z"),
            )
        except ValueError as exc:
            raise ConfigError(f"bad source parameters: {exc}") from exc

    def source_spec(self) -> SourceSpec:
        return self._source(self.getfloat("source", "pair_rate_per_mw"))

    def car_source_spec(self) -> SourceSpec:
        """Source used by the CAR sweep (its own tuned generation rate)."""
        return self._source(self.getfloat("car", "pair_rate_per_mw"))

    def channel_spec(self, arm: str) -> ChannelSpec:
        section = f"channel_{arm}"
        if section not in self._values:
            raise ConfigError(f"no such channel '{arm}'")
        try:
            return ChannelSpec(
                wavelength=Wavelength.from_nm(self.getfloat(section, "wavelength_nm")),
                loss_db=self.getfloat(section, "loss_db"),
                detector_efficiency=self.getfloat(section, "detector_efficiency"),
                dark_rate=self.getfloat(section, "dark_rate_hz"),
                jitter_sigma=self.getfloat(section, "jitter_sigma_ps") * 1e-12,
            )
        except ValueError as exc:
            raise ConfigError(f"bad [{section}] parameters: {exc}") from exc

    def link_spec(self) -> LinkSpec:
        try:
            return LinkSpec(
                source=self.source_spec(),
                ch_signal=self.channel_spec("signal"),
                ch_idler=self.channel_spec("idler"),
                window=self.getfloat("qkd", "window_ps") * 1e-12,
                ec_efficiency=self.getfloat("qkd", "ec_efficiency"),
                sifting_factor=self.getfloat("qkd", "sifting_factor"),
                intrinsic_error_z=self.getfloat("source", "intrinsic_error_z"),
                intrinsic_error_x=self.getfloat("source", "intrinsic_error_x"),
            )
        except ValueError as exc:
            raise ConfigError(f"bad link parameters: {exc}") from exc

    def franson_config(self) -> franson_mod.FransonConfig:
        try:
            return franson_mod.FransonConfig(
                fsr=self.getfloat("franson", "fsr_ghz") * 1e9,
                photon_bandwidth=self.getfloat("franson", "photon_bandwidth_ghz")
                * 1e9,
                pump_linewidth=self.getfloat("franson", "pump_linewidth_khz") * 1e3,
                visibility=self.getfloat("franson", "visibility"),
                phase_per_volt=self.getfloat("franson", "phase_per_volt"),
                phase_offset=self.getfloat("franson", "phase_offset"),
            )
        except ValueError as exc:
            raise ConfigError(f"bad [franson] parameters: {exc}") from exc

    def beam_rows(self) -> list:
        wavelengths = self.getfloats("beam", "wavelengths_nm")
        waists = self.getfloats("beam", "waists_um")
        if len(wavelengths) != len(waists):
            raise ConfigError(
                "[beam] wavelengths_nm and waists_um must have equal length"
            )
        return list(zip(wavelengths, waists))
