"""Sampling-grid conventions, waveform container, and comparison primitives.

Everything in this package lives on a uniform complex-baseband grid with
sample rate kappa*M/T0, chosen so that the delay step T0/M is exactly kappa
samples wide.  Every time shift performed by the pulse builders, modulators,
and channel is then an integer number of samples, which removes fractional
delay interpolation from the whole toolkit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

NMSE_FLOOR_DB = -300.0

# tolerance (in samples) when deciding whether two grids line up
_ALIGN_TOL = 1e-6


class ParameterError(ValueError):
    """A parameter set violates one of its validation rules."""


class GridMismatchError(ValueError):
    """Two waveforms do not share a compatible sampling grid."""


@dataclass(frozen=True)
class OddmParams:
    """Validated modulation geometry plus the derived grid quantities.

    Attributes:
        M: delay bins per T0; the delay step is T0/M.
        N: Doppler bins, one elementary pulse per bin.  Must be even; N == 1
            is tolerated as the degenerate single-pulse case (the modem
            additionally requires even N).
        T0: pulse spacing in seconds.
        Q: half length of the elementary pulse in units of T0/M.
        rho: raised-cosine family roll-off factor in [0, 1].
        kappa: oversampling multiplier; the sample rate is kappa*M/T0.
        force: skip the pulse-compactness (2Q <= M/4) and even-N guards,
            for experimentation only.
    """

    M: int
    N: int
    T0: float = 1.0
    Q: int = 16
    rho: float = 0.3
    kappa: int = 8
    force: bool = False

    def __post_init__(self) -> None:
        for name in ("M", "N", "Q", "kappa"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
        if self.M < 1:
            raise ParameterError("M must be a positive integer")
        if self.N < 1:
            raise ParameterError("N must be a positive integer")
        if self.Q < 1:
            raise ParameterError("Q must be a positive integer")
        if self.kappa < 2:
            raise ParameterError("kappa must be an integer >= 2")
        if not (math.isfinite(self.T0) and self.T0 > 0):
            raise ParameterError("T0 must be a positive finite number")
        if not (math.isfinite(self.rho) and 0.0 <= self.rho <= 1.0):
            raise ParameterError("rho must lie in [0, 1]")
        if not self.force:
            if self.N != 1 and self.N % 2 != 0:
                raise ParameterError(
                    f"N must be even (Doppler indices -N/2..N/2-1), got N={self.N}"
                )
            # "2Q << M" guard, enforced as 2Q <= M/4 (integer-exact as 8Q <= M)
            if 8 * self.Q > self.M:
                raise ParameterError(
                    f"2Q <= M/4 violated (Q={self.Q}, M={self.M}); "
                    "pass force=True to override"
                )

    @property
    def delta_t(self) -> float:
        """Delay step T0/M in seconds."""
        return self.T0 / self.M

    @property
    def delta_f(self) -> float:
        """Doppler step 1/(N*T0) in Hz."""
        return 1.0 / (self.N * self.T0)

    @property
    def rate(self) -> float:
        """Sample rate kappa*M/T0 in Hz."""
        return self.kappa * self.M / self.T0

    @property
    def bandwidth(self) -> float:
        """Occupied bandwidth M/T0 in Hz."""
        return self.M / self.T0

    @property
    def duration(self) -> float:
        """Frame duration N*T0 in seconds."""
        return self.N * self.T0

    @property
    def pulse_len(self) -> int:
        """Sample count of the elementary pulse, 2*Q*kappa + 1."""
        return 2 * self.Q * self.kappa + 1

    @property
    def ddop_len(self) -> int:
        """Sample count of the pulse train, kappa*((N-1)*M + 2*Q) + 1."""
        return self.kappa * ((self.N - 1) * self.M + 2 * self.Q) + 1

    @property
    def frame_len(self) -> int:
        """Sample count of a modulated frame, kappa*(N*M - 1 + 2*Q) + 1."""
        return self.kappa * (self.N * self.M - 1 + 2 * self.Q) + 1

    @property
    def doppler_indices(self) -> np.ndarray:
        """Doppler index vector -N/2 .. N/2-1 (just [0] for N == 1)."""
        return np.arange(self.N) - self.N // 2


class FrameDimensions(NamedTuple):
    bandwidth_hz: float
    duration_s: float


def frame_dimensions(params: OddmParams) -> FrameDimensions:
    """Occupied bandwidth and duration of a full modulated frame.

    Bandwidth is (N-1)*delta_f plus the analytic band of the roll-off
    family, (1+rho)*M/T0.  Duration is (M-1)*delta_t plus the pulse-train
    length (N-1)*T0 + 2Q*T0/M.
    """
    b_g = (1.0 + params.rho) * params.M / params.T0
    b_x = (params.N - 1) * params.delta_f + b_g
    t_u = (params.N - 1) * params.T0 + 2 * params.Q * params.delta_t
    t_x = (params.M - 1) * params.delta_t + t_u
    return FrameDimensions(bandwidth_hz=b_x, duration_s=t_x)


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled complex baseband signal.

    Sample k represents the signal value at t_start + k/rate.  Instances are
    treated as immutable values; operations return new waveforms.
    """

    samples: np.ndarray
    rate: float
    t_start: float = 0.0

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.complex128)
        if samples.ndim != 1:
            raise ValueError("waveform samples must be one-dimensional")
        if not np.all(np.isfinite(samples.view(np.float64))):
            raise ValueError("waveform samples must be finite")
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise ValueError("waveform rate must be positive")
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.rate

    @property
    def t_end(self) -> float:
        """Time of the last sample."""
        return self.t_start + (len(self.samples) - 1) / self.rate

    @property
    def energy(self) -> float:
        """Riemann-sum energy, sum |x[k]|^2 / rate."""
        return float(np.sum(np.abs(self.samples) ** 2)) / self.rate

    def times(self) -> np.ndarray:
        return self.t_start + np.arange(len(self.samples)) / self.rate

    def shifted(self, tau: float) -> "Waveform":
        """The same samples re-anchored tau seconds later."""
        return Waveform(self.samples, self.rate, self.t_start + tau)


def sample_offset(x: Waveform, y: Waveform) -> int:
    """Integer sample offset of y's grid relative to x's.

    Raises GridMismatchError when the rates differ or the offset is not an
    integer number of samples.
    """
    if x.rate != y.rate:
        raise GridMismatchError(
            f"sample rates differ ({x.rate} Hz vs {y.rate} Hz)"
        )
    shift = (y.t_start - x.t_start) * x.rate
    offset = round(shift)
    if abs(shift - offset) > _ALIGN_TOL:
        raise GridMismatchError(
            f"time origins differ by a non-integer number of samples ({shift})"
        )
    return offset


def inner_product(x: Waveform, y: Waveform) -> complex:
    """Riemann-sum inner product sum_k x[k] conj(y[k]) / rate.

    The two waveforms are aligned by their time origins; samples outside the
    overlap contribute nothing, and disjoint supports yield exactly 0.
    """
    d = sample_offset(x, y)
    lo = max(0, d)
    hi = min(len(x), d + len(y))
    if hi <= lo:
        return 0.0 + 0.0j
    acc = np.vdot(y.samples[lo - d : hi - d], x.samples[lo:hi])
    return complex(acc / x.rate)


def nmse_db(reference: Waveform, test: Waveform) -> float:
    """Normalized mean square error of test against reference, in dB.

    Both waveforms are zero-padded to the union of their supports before the
    difference is taken.  Returns the -300 dB floor when the error energy is
    exactly zero; a zero-energy reference is an error.
    """
    d = sample_offset(reference, test)
    ref = reference.samples
    tst = test.samples
    den = float(np.sum(np.abs(ref) ** 2))
    if den == 0.0:
        raise ValueError("reference waveform has zero energy")
    lo = max(0, d)
    hi = min(len(ref), d + len(tst))
    num = 0.0
    if hi > lo:
        num += float(np.sum(np.abs(tst[lo - d : hi - d] - ref[lo:hi]) ** 2))
        num += float(np.sum(np.abs(ref[:lo]) ** 2))
        num += float(np.sum(np.abs(ref[hi:]) ** 2))
        num += float(np.sum(np.abs(tst[: lo - d]) ** 2))
        num += float(np.sum(np.abs(tst[hi - d :]) ** 2))
    else:
        num = den + float(np.sum(np.abs(tst) ** 2))
    if num == 0.0:
        return NMSE_FLOOR_DB
    return 10.0 * math.log10(num / den)


def fourier_transform(x: Waveform, freqs: np.ndarray) -> np.ndarray:
    """Riemann-sum Fourier transform sum_k x[k] e^{-j2pi f t_k} / rate.

    Evaluated at arbitrary frequencies; the phase reference honours t_start.
    Chunked over frequencies to bound memory.
    """
    freqs = np.asarray(freqs, dtype=float)
    t = x.times()
    out = np.empty(freqs.shape, dtype=np.complex128)
    chunk = max(1, (1 << 22) // max(len(t), 1))
    flat = freqs.ravel()
    res = out.ravel()
    for i in range(0, len(flat), chunk):
        f = flat[i : i + chunk]
        res[i : i + chunk] = np.exp(-2j * np.pi * np.outer(f, t)) @ x.samples
    return out / x.rate


@dataclass(frozen=True)
class SymbolFrame:
    """M x N grid of digital symbols X[m, n].

    Column j of ``data`` holds Doppler index n = j - N//2, so the columns run
    over n = -N/2 .. N/2-1 for even N.
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != 2:
            raise ValueError("symbol frame must be a 2-D array")
        if not np.all(np.isfinite(data.view(np.float64))):
            raise ValueError("symbol frame entries must be finite")
        object.__setattr__(self, "data", data)

    @property
    def M(self) -> int:
        return self.data.shape[0]

    @property
    def N(self) -> int:
        return self.data.shape[1]

    @property
    def doppler_indices(self) -> np.ndarray:
        return np.arange(self.N) - self.N // 2

    @classmethod
    def zeros(cls, M: int, N: int) -> "SymbolFrame":
        return cls(np.zeros((M, N), dtype=np.complex128))

    def column_of(self, n: int) -> int:
        """Array column holding Doppler index n."""
        j = n + self.N // 2
        if not 0 <= j < self.N:
            raise IndexError(f"Doppler index {n} outside -N/2..N/2-1")
        return j
