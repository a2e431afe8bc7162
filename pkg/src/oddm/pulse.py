"""Elementary pulses, the delay-Doppler orthogonal pulse, and its diagnostics.

The DDOP is a train of N root-Nyquist elementary pulses spaced T0 apart.  It
can be synthesized either directly in the time domain (a sum of shifted
copies of the elementary pulse) or from its frequency-domain representation
(a finite Fourier series under the analytic pulse spectrum, windowed to the
train duration).  Both constructions are provided, together with the
analytic spectrum and the ambiguity-function machinery used to certify the
pulse's orthogonality on the delay-Doppler grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridMismatchError, OddmParams, Waveform, inner_product

RRC = "root-raised-cosine"
RC = "raised-cosine"
SINC = "sinc"
PULSE_KINDS = (RRC, RC, SINC)

_KIND_ALIASES = {"rrc": RRC, "rc": RC, RRC: RRC, RC: RC, SINC: SINC}

# relative slack for band-edge comparisons; the flat band is closed so the
# edge bins of a sinc (or zero roll-off) pulse carry full weight
_EDGE_TOL = 1e-12


def canonical_kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[kind.lower()]
    except KeyError:
        raise ValueError(f"unknown pulse kind {kind!r}; expected one of {PULSE_KINDS}")


def sinc_shape(t: np.ndarray, nyquist_interval: float) -> np.ndarray:
    """Unit-energy sinc pulse with zero crossings at multiples of the interval."""
    return np.sinc(np.asarray(t, dtype=float) / nyquist_interval) / math.sqrt(
        nyquist_interval
    )


def rrc_shape(t: np.ndarray, nyquist_interval: float, rho: float) -> np.ndarray:
    """Unit-energy root-raised-cosine pulse evaluated at arbitrary times.

    The removable singularities at t = 0 and |t| = T/(4 rho) are replaced by
    their analytic limits.
    """
    ts = nyquist_interval
    t = np.asarray(t, dtype=float)
    if rho == 0.0:
        return sinc_shape(t, ts)
    x = t / ts
    near_zero = np.isclose(t, 0.0, rtol=0.0, atol=1e-12 * ts)
    near_sing = np.isclose(np.abs(x), 1.0 / (4.0 * rho), rtol=1e-12, atol=0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        num = np.sin(np.pi * x * (1 - rho)) + 4 * rho * x * np.cos(np.pi * x * (1 + rho))
        den = np.pi * x * (1.0 - (4.0 * rho * x) ** 2)
        out = num / den
    out[near_zero] = 1.0 - rho + 4.0 * rho / np.pi
    out[near_sing] = (rho / math.sqrt(2.0)) * (
        (1.0 + 2.0 / np.pi) * math.sin(np.pi / (4.0 * rho))
        + (1.0 - 2.0 / np.pi) * math.cos(np.pi / (4.0 * rho))
    )
    return out / math.sqrt(ts)


def rc_shape(t: np.ndarray, nyquist_interval: float, rho: float) -> np.ndarray:
    """Unit-energy raised-cosine (Nyquist) pulse at arbitrary times."""
    ts = nyquist_interval
    t = np.asarray(t, dtype=float)
    if rho == 0.0:
        return sinc_shape(t, ts)
    x = t / ts
    near_sing = np.isclose(np.abs(x), 1.0 / (2.0 * rho), rtol=1e-12, atol=0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sinc(x) * np.cos(np.pi * rho * x) / (1.0 - (2.0 * rho * x) ** 2)
    out[near_sing] = (np.pi / 4.0) * np.sinc(1.0 / (2.0 * rho))
    # peak-one form carries energy ts*(1 - rho/4); rescale to unit energy
    return out / math.sqrt(ts * (1.0 - rho / 4.0))


def sinc_spectrum(f: np.ndarray, nyquist_interval: float) -> np.ndarray:
    """Transform of the unit-energy sinc pulse (flat band, closed edges)."""
    ts = nyquist_interval
    x = np.abs(np.asarray(f, dtype=float)) * ts
    return np.where(x <= 0.5 * (1.0 + _EDGE_TOL), math.sqrt(ts), 0.0)


def rrc_spectrum(f: np.ndarray, nyquist_interval: float, rho: float) -> np.ndarray:
    """Transform of the unit-energy root-raised-cosine pulse."""
    ts = nyquist_interval
    if rho == 0.0:
        return sinc_spectrum(f, ts)
    x = np.abs(np.asarray(f, dtype=float)) * ts
    f1 = 0.5 * (1.0 - rho)
    f2 = 0.5 * (1.0 + rho)
    out = np.zeros_like(x)
    out[x <= f1 * (1.0 + _EDGE_TOL)] = math.sqrt(ts)
    taper = (x > f1) & (x < f2)
    out[taper] = math.sqrt(ts) * np.cos((np.pi / (2.0 * rho)) * (x[taper] - f1))
    return out


def rc_spectrum(f: np.ndarray, nyquist_interval: float, rho: float) -> np.ndarray:
    """Transform of the unit-energy raised-cosine pulse."""
    ts = nyquist_interval
    if rho == 0.0:
        return sinc_spectrum(f, ts)
    x = np.abs(np.asarray(f, dtype=float)) * ts
    f1 = 0.5 * (1.0 - rho)
    f2 = 0.5 * (1.0 + rho)
    scale = 1.0 / math.sqrt(ts * (1.0 - rho / 4.0))
    out = np.zeros_like(x)
    out[x <= f1 * (1.0 + _EDGE_TOL)] = ts * scale
    taper = (x > f1) & (x < f2)
    out[taper] = (
        0.5 * ts * (1.0 + np.cos((np.pi / rho) * (x[taper] - f1))) * scale
    )
    return out


def pulse_shape(kind: str, t: np.ndarray, nyquist_interval: float, rho: float) -> np.ndarray:
    kind = canonical_kind(kind)
    if kind == SINC:
        return sinc_shape(t, nyquist_interval)
    if kind == RRC:
        return rrc_shape(t, nyquist_interval, rho)
    return rc_shape(t, nyquist_interval, rho)


def pulse_spectrum(kind: str, f: np.ndarray, nyquist_interval: float, rho: float) -> np.ndarray:
    kind = canonical_kind(kind)
    if kind == SINC:
        return sinc_spectrum(f, nyquist_interval)
    if kind == RRC:
        return rrc_spectrum(f, nyquist_interval, rho)
    return rc_spectrum(f, nyquist_interval, rho)


@dataclass(frozen=True)
class ElementaryPulse:
    """Truncated, unit-energy elementary pulse sampled on the common grid.

    Real-valued and even-symmetric, centered at t = 0 with support
    [-Q*T0/M, +Q*T0/M].
    """

    kind: str
    rho: float
    nyquist_interval: float
    half_len_q: int
    samples: np.ndarray
    rate: float

    @property
    def t_start(self) -> float:
        return -self.half_len_q * self.nyquist_interval

    @property
    def energy(self) -> float:
        return float(np.sum(self.samples**2)) / self.rate

    def times(self) -> np.ndarray:
        half = (len(self.samples) - 1) // 2
        return (np.arange(len(self.samples)) - half) / self.rate

    def as_waveform(self) -> Waveform:
        return Waveform(self.samples.astype(np.complex128), self.rate, self.t_start)


def make_elementary_pulse(params: OddmParams, kind: str = RRC) -> ElementaryPulse:
    """Evaluate the closed-form pulse on the grid, truncate, and renormalize.

    Truncation to +-Q*T0/M uses no taper window; renormalization restores
    exact unit energy on the discrete grid.
    """
    kind = canonical_kind(kind)
    rate = params.rate
    k = np.arange(-params.Q * params.kappa, params.Q * params.kappa + 1)
    samples = pulse_shape(kind, k / rate, params.delta_t, params.rho)
    samples = samples / math.sqrt(float(np.sum(samples**2)) / rate)
    return ElementaryPulse(
        kind=kind,
        rho=params.rho,
        nyquist_interval=params.delta_t,
        half_len_q=params.Q,
        samples=samples,
        rate=rate,
    )


@dataclass(frozen=True)
class DdopPulse:
    """Sampled pulse train, anchored at t_start = -Q*T0/M.

    ``normalized`` distinguishes the unit-energy form (the plain sum scaled
    by 1/sqrt(N)) from the literal pulse-train sum.
    """

    params: OddmParams
    samples: np.ndarray
    normalized: bool

    @property
    def rate(self) -> float:
        return self.params.rate

    @property
    def t_start(self) -> float:
        return -self.params.Q * self.params.delta_t

    @property
    def duration(self) -> float:
        return (self.params.N - 1) * self.params.T0 + 2 * self.params.Q * self.params.delta_t

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2)) / self.rate

    def times(self) -> np.ndarray:
        return self.t_start + np.arange(len(self.samples)) / self.rate

    def as_waveform(self) -> Waveform:
        return Waveform(self.samples, self.rate, self.t_start)


def build_ddop_timedomain(
    a: ElementaryPulse, params: OddmParams, normalized: bool = False
) -> DdopPulse:
    """Sum of N copies of the elementary pulse spaced T0 apart."""
    if a.half_len_q != params.Q or a.rate != params.rate:
        raise ValueError("elementary pulse was built with different parameters")
    out = np.zeros(params.ddop_len, dtype=np.float64)
    step = params.kappa * params.M
    for i in range(params.N):
        out[i * step : i * step + len(a.samples)] += a.samples
    if normalized:
        out /= math.sqrt(params.N)
    return DdopPulse(params=params, samples=out.astype(np.complex128), normalized=normalized)


def m_check(params: OddmParams, kind: str = RRC) -> int:
    """Number of frequency bins (less one) under the pulse envelope.

    The smallest even integer covering the analytic band (1+rho)*M for the
    raised-cosine family; exactly M for the sinc pulse (rounded up to even).
    """
    kind = canonical_kind(kind)
    if kind == SINC:
        return params.M if params.M % 2 == 0 else params.M + 1
    return 2 * math.ceil((1.0 + params.rho) * params.M / 2.0)


def build_ddop_fourier(
    params: OddmParams, kind: str = RRC, normalized: bool = False
) -> DdopPulse:
    """Pulse train synthesized from its finite Fourier series.

    Evaluates (1/T0) * sum_m A(m/T0) e^{j2pi m t/T0} over the bins covered by
    the analytic spectrum A of the untruncated elementary pulse, windowed by
    the rectangle of length N*T0 that selects pulse positions 0..N-1, on the
    same sample grid as the time-domain construction.
    """
    kind = canonical_kind(kind)
    mc = m_check(params, kind)
    t0 = params.T0
    t = -params.Q * params.delta_t + np.arange(params.ddop_len) / params.rate
    bins = np.arange(-mc // 2, mc // 2 + 1)
    weights = pulse_spectrum(kind, bins / t0, params.delta_t, params.rho)
    out = np.zeros(len(t), dtype=np.complex128)
    for m, w in zip(bins, weights):
        if w != 0.0:
            out += w * np.exp(2j * np.pi * m * t / t0)
    out /= t0
    # window of length N*T0 positioned to keep pulses 0..N-1
    inside = (t >= -t0 / 2 - _EDGE_TOL) & (t <= params.N * t0 - t0 / 2 + _EDGE_TOL)
    out[~inside] = 0.0
    if normalized:
        out /= math.sqrt(params.N)
    return DdopPulse(params=params, samples=out, normalized=normalized)


@dataclass(frozen=True)
class DdopSpectrum:
    """Analytic frequency-domain representation of the pulse train."""

    freqs: np.ndarray
    values: np.ndarray
    m_check: int
    t_tilde: float


def ddop_spectrum_analytic(
    params: OddmParams, kind: str = RRC, freqs: np.ndarray | None = None
) -> DdopSpectrum:
    """Closed-form spectrum: a train of sinc lobes under the pulse envelope.

    U(f) = (e^{-j2pi f T~}/T0) A(f) sum_m (-1)^{m(N-1)} sinc(f N T0 - m N),
    with T~ = Q*T0/M + (N-1)*T0/2 and the sum truncated two bins past the
    envelope support, beyond which every term vanishes.
    """
    kind = canonical_kind(kind)
    mc = m_check(params, kind)
    t0 = params.T0
    if freqs is None:
        # half-bin steps across the occupied band plus one guard lobe
        f_max = (mc / 2 + 1) / t0
        step = params.delta_f / 2.0
        freqs = np.arange(-round(f_max / step), round(f_max / step) + 1) * step
    freqs = np.asarray(freqs, dtype=float)
    t_tilde = params.Q * params.delta_t + (params.N - 1) * t0 / 2.0
    acc = np.zeros(freqs.shape, dtype=np.float64)
    for m in range(-(mc // 2 + 2), mc // 2 + 3):
        sign = -1.0 if (m * (params.N - 1)) % 2 else 1.0
        acc += sign * np.sinc(freqs * params.N * t0 - m * params.N)
    envelope = pulse_spectrum(kind, freqs, params.delta_t, params.rho)
    values = np.exp(-2j * np.pi * freqs * t_tilde) / t0 * envelope * acc
    return DdopSpectrum(freqs=freqs, values=values, m_check=mc, t_tilde=t_tilde)


def ambiguity(u: DdopPulse, tau: float, nu: float) -> complex:
    """Inner product of the pulse with its time-frequency shifted copy.

    tau must be an integer number of samples; off-grid delays raise
    GridMismatchError.  For the normalized pulse the origin value is 1.
    """
    base = u.as_waveform()
    shifted = Waveform(
        u.samples * np.exp(2j * np.pi * nu * u.times()),
        u.rate,
        u.t_start + tau,
    )
    return inner_product(base, shifted)


@dataclass(frozen=True)
class OrthogonalityReport:
    """Ambiguity magnitudes over the full delay-Doppler index grid."""

    delay_steps: np.ndarray
    doppler_steps: np.ndarray
    magnitudes: np.ndarray
    origin_value: complex

    @property
    def max_off_origin(self) -> float:
        mags = self.magnitudes.copy()
        mags[len(self.delay_steps) // 2, len(self.doppler_steps) // 2] = -1.0
        return float(mags.max())

    @property
    def max_location(self) -> tuple[int, int]:
        """Grid point attaining the off-origin maximum.

        Floating-point ties break toward the lowest (|m|, |n|), then
        lexicographically on (m, n).
        """
        target = self.max_off_origin
        best = None
        for i, m in enumerate(self.delay_steps):
            for j, n in enumerate(self.doppler_steps):
                if (m, n) == (0, 0):
                    continue
                if self.magnitudes[i, j] == target:
                    key = (abs(m), abs(n), m, n)
                    if best is None or key < best[0]:
                        best = (key, (int(m), int(n)))
        return best[1]

    @property
    def max_off_origin_db(self) -> float:
        value = self.max_off_origin
        return 20.0 * math.log10(value) if value > 0 else -math.inf


def orthogonality_scan(u: DdopPulse) -> OrthogonalityReport:
    """Evaluate the ambiguity function over |m| <= M-1, |n| <= N-1.

    Requires the normalized pulse so that the origin reads 1.  Doppler rows
    for a fixed delay are evaluated by running powers of a single phase
    ramp, so each grid point costs one vector pass.
    """
    if not u.normalized:
        raise ValueError("orthogonality scan requires the unit-energy pulse")
    p = u.params
    rate = u.rate
    n_sam = len(u.samples)
    t = u.times()
    delay_steps = np.arange(-(p.M - 1), p.M)
    doppler_steps = np.arange(-(p.N - 1), p.N)
    mags = np.zeros((len(delay_steps), len(doppler_steps)))
    origin = 0.0 + 0.0j
    for i, m in enumerate(delay_steps):
        d = int(m) * p.kappa
        if d >= 0:
            left = u.samples[d:]
            right = np.conj(u.samples[: n_sam - d])
            tt = t[: n_sam - d]
        else:
            left = u.samples[: n_sam + d]
            right = np.conj(u.samples[-d:])
            tt = t[-d:]
        base = left * right
        ramp = np.exp(-2j * np.pi * p.delta_f * tt)
        fwd = base.copy()
        bwd = base.copy()
        j0 = p.N - 1
        mags[i, j0] = abs(base.sum() / rate)
        if m == 0:
            origin = complex(base.sum() / rate)
        for n in range(1, p.N):
            fwd *= ramp
            bwd *= np.conj(ramp)
            mags[i, j0 + n] = abs(fwd.sum() / rate)
            mags[i, j0 - n] = abs(bwd.sum() / rate)
    return OrthogonalityReport(
        delay_steps=delay_steps,
        doppler_steps=doppler_steps,
        magnitudes=mags,
        origin_value=origin,
    )
