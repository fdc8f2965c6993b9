"""Event-level Monte Carlo oracle for the analytic counting model.

Pairs are emitted as a homogeneous Poisson process; each photon of a pair
survives its arm independently with the arm transmission; detections pick
up Gaussian timing jitter; dark counts are an independent Poisson process
per channel. Coincidences use greedy one-to-one matching in time order,
the same bookkeeping a hardware time tagger with single-use tags applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .pairstats import ChannelSpec, SourceSpec, arm_transmission, pair_rate

RNG_ALGORITHM = "PCG64"  # numpy default_rng bit generator


@dataclass(frozen=True)
class TagStream:
    """Sorted detection timestamps for one channel."""

    timestamps: np.ndarray  # s, strictly increasing
    channel_id: str
    seed: object
    duration: float
    rng_algorithm: str = RNG_ALGORITHM

    def __post_init__(self):
        ts = np.asarray(self.timestamps, dtype=float)
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        if ts.ndim != 1:
            raise ValueError("timestamps must be one-dimensional")
        if ts.size and (ts[0] < 0.0 or ts[-1] >= self.duration):
            raise ValueError("timestamps must lie in [0, duration)")
        if ts.size > 1 and not np.all(np.diff(ts) > 0):
            raise ValueError("timestamps must be strictly increasing")
        ts.setflags(write=False)
        object.__setattr__(self, "timestamps", ts)

    def __len__(self):
        return self.timestamps.size


def _finalize(times: np.ndarray, duration: float) -> np.ndarray:
    # jitter can push events out of the observation window; drop those,
    # and dedupe to keep the strictly-sorted invariant (float collisions
    # are measure-zero but cheap to rule out)
    times = times[(times >= 0.0) & (times < duration)]
    return np.unique(times)


def simulate_streams(
    source: SourceSpec,
    ch_a: ChannelSpec,
    ch_b: ChannelSpec,
    pump_mw: float,
    duration: float,
    seed=None,
):
    """Generate one detection-time stream per arm. Deterministic per seed.

    Arm a is the signal (810 nm) arm, arm b the idler, matching the
    analytic count_model convention.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    rng = np.random.default_rng(seed)

    r = pair_rate(source, pump_mw)
    n_pairs = rng.poisson(r * duration)
    emission = rng.uniform(0.0, duration, size=n_pairs)

    t_a = arm_transmission(ch_a, source.heralding_810)
    t_b = arm_transmission(ch_b, source.heralding_1550)
    kept_a = emission[rng.random(n_pairs) < t_a]
    kept_b = emission[rng.random(n_pairs) < t_b]

    streams = []
    for name, kept, ch in (("signal", kept_a, ch_a), ("idler", kept_b, ch_b)):
        times = kept
        if ch.jitter_sigma > 0 and times.size:
            times = times + rng.normal(0.0, ch.jitter_sigma, size=times.size)
        darks = rng.uniform(0.0, duration, size=rng.poisson(ch.dark_rate * duration))
        times = _finalize(np.concatenate([times, darks]), duration)
        streams.append(
            TagStream(
                timestamps=times, channel_id=name, seed=seed, duration=duration
            )
        )
    return streams[0], streams[1]


@njit(cache=True)
def _greedy_match(a, b, half_window, offset):
    count = 0
    i = 0
    j = 0
    na = a.size
    nb = b.size
    while i < na and j < nb:
        dt = b[j] - a[i] - offset
        if dt < -half_window:
            j += 1
        elif dt > half_window:
            i += 1
        else:
            count += 1
            i += 1
            j += 1
    return count


def count_coincidences(
    a: TagStream, b: TagStream, window: float, offset: float = 0.0
) -> int:
    """Pairs with |t_b - t_a - offset| <= window/2, each tag used once.

    Matching is greedy in ascending time order, which is order-deterministic
    and symmetric under swapping the streams with offset negation.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    return int(
        _greedy_match(a.timestamps, b.timestamps, 0.5 * window, float(offset))
    )


def car_estimate(
    a: TagStream,
    b: TagStream,
    window: float,
    accidental_offset: float = 100e-9,
) -> float:
    """Delayed-window CAR: coincidences at zero offset over a shifted copy.

    The offset must dwarf the window so the shifted count samples pure
    accidentals.
    """
    if abs(accidental_offset) <= window:
        raise ValueError("accidental_offset must greatly exceed the window")
    prompt = count_coincidences(a, b, window, 0.0)
    delayed = count_coincidences(a, b, window, accidental_offset)
    if delayed == 0:
        raise ValueError(
            "no accidental coincidences in the delayed window; "
            "increase the acquisition duration"
        )
    return prompt / delayed


# --- stream export --------------------------------------------------------------


def tags_to_ps(stream: TagStream) -> np.ndarray:
    """Timestamps as unsigned 64-bit picosecond integers."""
    return np.round(stream.timestamps * 1e12).astype(np.uint64)


def write_tags_csv(path, stream: TagStream) -> None:
    """One picosecond timestamp per line, header-free."""
    np.savetxt(path, tags_to_ps(stream), fmt="%d")


def write_tags_binary(path, stream: TagStream) -> None:
    """Raw little-endian uint64 picosecond timestamps."""
    tags_to_ps(stream).astype("<u8").tofile(path)
