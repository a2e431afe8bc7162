"""Sampled delay-Doppler multipath channel and calibrated complex AWGN.

Paths act as y(t) = sum_p gain_p * x(t - tau_p) * exp(j 2 pi nu_p (t - tau_p)),
with every delay restricted to the sampling grid (the Doppler values stay
unrestricted reals).  Noise is circularly symmetric complex Gaussian with
per-sample variance N0 * rate, optionally derived from an Eb/N0 operating
point and the frame's bit count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .grid import GridMismatchError, Waveform


@dataclass(frozen=True)
class ChannelPath:
    gain: complex
    delay_s: float
    doppler_hz: float

    def __post_init__(self) -> None:
        gain = complex(self.gain)
        if not (math.isfinite(gain.real) and math.isfinite(gain.imag)):
            raise ValueError("path gain must be finite")
        if not (math.isfinite(self.delay_s) and self.delay_s >= 0):
            raise ValueError("path delay must be finite and non-negative")
        if not math.isfinite(self.doppler_hz):
            raise ValueError("path Doppler must be finite")
        object.__setattr__(self, "gain", gain)


@dataclass(frozen=True)
class ChannelSpec:
    """Multipath description; an empty path list yields the zero channel."""

    paths: tuple[ChannelPath, ...] = ()
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "paths", tuple(self.paths))

    def to_json_dict(self) -> dict:
        return {
            "paths": [
                {
                    "gain_re": p.gain.real,
                    "gain_im": p.gain.imag,
                    "delay_s": p.delay_s,
                    "doppler_hz": p.doppler_hz,
                }
                for p in self.paths
            ],
            "seed": self.seed,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ChannelSpec":
        if not isinstance(doc, dict) or "paths" not in doc:
            raise ValueError("channel document must be an object with a 'paths' list")
        raw_paths = doc["paths"]
        if not isinstance(raw_paths, list):
            raise ValueError("'paths' must be a list")
        paths = []
        for i, entry in enumerate(raw_paths):
            try:
                paths.append(
                    ChannelPath(
                        gain=complex(entry["gain_re"], entry["gain_im"]),
                        delay_s=float(entry["delay_s"]),
                        doppler_hz=float(entry["doppler_hz"]),
                    )
                )
            except (KeyError, TypeError) as exc:
                raise ValueError(f"path {i} is malformed: {exc}") from exc
        seed = doc.get("seed", 0)
        if not isinstance(seed, int):
            raise ValueError("'seed' must be an integer")
        return cls(paths=tuple(paths), seed=seed)

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "ChannelSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValueError(f"channel document is not valid JSON: {exc}") from exc
        return cls.from_json_dict(doc)


def apply_channel(x: Waveform, spec: ChannelSpec) -> Waveform:
    """Superpose the delayed, Doppler-rotated path copies.

    The output support is extended by the largest delay.  Each Doppler
    rotation is anchored at its own path delay, so a unit-gain path always
    preserves energy.
    """
    delays = []
    for p in spec.paths:
        d = p.delay_s * x.rate
        di = round(d)
        if abs(d - di) > 1e-6:
            raise GridMismatchError(
                f"path delay {p.delay_s} s is not an integer number of samples"
            )
        delays.append(di)
    extra = max(delays, default=0)
    out = np.zeros(len(x.samples) + extra, dtype=np.complex128)
    t_local = x.times()
    for p, di in zip(spec.paths, delays):
        if p.doppler_hz == 0.0:
            out[di : di + len(x.samples)] += p.gain * x.samples
        else:
            ramp = np.exp(2j * np.pi * p.doppler_hz * t_local)
            out[di : di + len(x.samples)] += p.gain * x.samples * ramp
    return Waveform(out, x.rate, x.t_start)


@dataclass(frozen=True)
class NoiseSpec:
    """One-sided noise density, given directly or as an Eb/N0 target."""

    n0: float | None = None
    ebn0_db: float | None = None

    def __post_init__(self) -> None:
        if (self.n0 is None) == (self.ebn0_db is None):
            raise ValueError("set exactly one of n0 and ebn0_db")
        if self.n0 is not None and not (math.isfinite(self.n0) and self.n0 >= 0):
            raise ValueError("n0 must be finite and non-negative")
        if self.ebn0_db is not None and not math.isfinite(self.ebn0_db):
            raise ValueError("ebn0_db must be finite")


def noise_density(noise: NoiseSpec, x: Waveform, frame_bits: int | None = None) -> float:
    """Resolve the spec to a density N0, using Eb = energy/frame_bits if needed."""
    if noise.n0 is not None:
        return noise.n0
    if frame_bits is None or frame_bits <= 0:
        raise ValueError("frame_bits must be positive when ebn0_db is used")
    energy = x.energy
    if energy == 0.0:
        raise ValueError("cannot derive N0 from Eb/N0 for a zero-energy waveform")
    eb = energy / frame_bits
    return eb * 10.0 ** (-noise.ebn0_db / 10.0)


def add_noise(
    x: Waveform, noise: NoiseSpec, frame_bits: int | None = None, seed: int = 0
) -> Waveform:
    """Add circularly symmetric complex Gaussian noise of variance N0*rate.

    Each real component has variance N0*rate/2.  Deterministic for a given
    (seed, length, density).
    """
    n0 = noise_density(noise, x, frame_bits)
    if n0 == 0.0:
        return Waveform(x.samples.copy(), x.rate, x.t_start)
    sigma = math.sqrt(n0 * x.rate / 2.0)
    rng = np.random.default_rng(seed)
    parts = rng.standard_normal((2, len(x.samples)))
    samples = x.samples + sigma * (parts[0] + 1j * parts[1])
    return Waveform(samples, x.rate, x.t_start)
