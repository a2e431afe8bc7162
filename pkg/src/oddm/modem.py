"""The three modulator paths and the correlator demodulator.

``modulate_direct`` evaluates the defining double sum term by term and acts
as the oracle for everything else.  ``modulate_exact`` is the IDFT-based
pulse-shaped OFDM realization: the per-symbol Doppler tone mixture is a
periodic, strictly band-limited signal, so its ideal interpolation is
evaluated exactly through a zero-padded inverse FFT before pulse shaping.
``modulate_filtered`` is the approximate wideband filtered-OFDM realization
that places the Doppler IDFT outputs on the delay grid and convolves once
with the elementary pulse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft
from scipy.signal import fftconvolve

from .grid import OddmParams, SymbolFrame, Waveform, sample_offset
from .pulse import DdopPulse, ElementaryPulse

DIRECT = "direct"
EXACT = "exact"
FILTERED = "filtered"

# chunk of delay columns whose interpolation FFTs run as one batch
_FFT_BATCH_ENTRIES = 1 << 22


@dataclass(frozen=True)
class ModulatedFrame:
    """A synthesized frame waveform tagged with the path that produced it."""

    waveform: Waveform
    params: OddmParams
    path: str


def random_qpsk_frame(params: OddmParams, seed: int) -> SymbolFrame:
    """Unit-power QPSK symbols, (+-1 +-j)/sqrt(2), drawn deterministically."""
    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, size=(params.M, params.N, 2))
    data = ((2 * bits[..., 0] - 1) + 1j * (2 * bits[..., 1] - 1)) / math.sqrt(2.0)
    return SymbolFrame(data)


def _check_modem_inputs(frame: SymbolFrame, u: DdopPulse) -> OddmParams:
    p = u.params
    if p.N % 2 != 0:
        raise ValueError("the modem requires an even number of Doppler bins")
    if frame.data.shape != (p.M, p.N):
        raise ValueError(
            f"frame shape {frame.data.shape} does not match (M, N)=({p.M}, {p.N})"
        )
    if not u.normalized:
        raise ValueError("modulation uses the unit-energy pulse; build with normalized=True")
    return p


def _doppler_phase_table(p: OddmParams, t: np.ndarray) -> np.ndarray:
    """Rows exp(+j 2 pi n delta_f t) for n = -N/2 .. N/2-1."""
    return np.exp(2j * np.pi * p.delta_f * np.outer(p.doppler_indices, t))


def modulate_direct(frame: SymbolFrame, u: DdopPulse) -> ModulatedFrame:
    """Literal evaluation of the two-dimensional modulation sum."""
    p = _check_modem_inputs(frame, u)
    table = _doppler_phase_table(p, u.times())
    out = np.zeros(p.frame_len, dtype=np.complex128)
    step = p.kappa
    for m in range(p.M):
        mixed = frame.data[m, :] @ table
        out[m * step : m * step + len(u.samples)] += mixed * u.samples
    wave = Waveform(out, p.rate, u.t_start)
    return ModulatedFrame(waveform=wave, params=p, path=DIRECT)


def doppler_idft(frame: SymbolFrame, m: int) -> np.ndarray:
    """Doppler tone mixture of delay column m sampled at the pulse positions.

    Computed as an N-point inverse DFT with bin order
    [X[m,0] .. X[m,N/2-1], X[m,-N/2] .. X[m,-1]] and no 1/N factor, so that
    entry ndot equals sum_n X[m,n] e^{j 2 pi n ndot / N} exactly.
    """
    if not 0 <= m < frame.M:
        raise IndexError(f"delay index {m} outside 0..{frame.M - 1}")
    bins = np.fft.ifftshift(frame.data[m, :])
    return np.fft.ifft(bins) * frame.N


def _doppler_idft_all(frame: SymbolFrame) -> np.ndarray:
    return np.fft.ifft(np.fft.ifftshift(frame.data, axes=1), axis=1) * frame.N


def modulate_exact(frame: SymbolFrame, u: DdopPulse) -> ModulatedFrame:
    """IDFT-based synthesis with exact band-limited interpolation.

    Each delay column's tone mixture is periodic with period N*T0 and
    strictly band-limited, so one period of its ideal interpolation is the
    zero-padded inverse FFT of its Doppler bins; the pulse train then gates
    that period (extended by its own periodicity) into the output.
    """
    p = _check_modem_inputs(frame, u)
    period = p.kappa * p.M * p.N
    n_pulse = len(u.samples)
    wrap = (np.arange(n_pulse) - p.Q * p.kappa) % period
    bin_slots = p.doppler_indices % period
    out = np.zeros(p.frame_len, dtype=np.complex128)
    batch = max(1, _FFT_BATCH_ENTRIES // period)
    for m0 in range(0, p.M, batch):
        rows = min(batch, p.M - m0)
        bins = np.zeros((rows, period), dtype=np.complex128)
        bins[:, bin_slots] = frame.data[m0 : m0 + rows, :]
        periods = scipy.fft.ifft(bins, axis=1, overwrite_x=True)
        periods *= period
        for i in range(rows):
            start = (m0 + i) * p.kappa
            out[start : start + n_pulse] += periods[i, wrap] * u.samples
    wave = Waveform(out, p.rate, u.t_start)
    return ModulatedFrame(waveform=wave, params=p, path=EXACT)


def modulate_filtered(
    frame: SymbolFrame, a: ElementaryPulse, params: OddmParams
) -> ModulatedFrame:
    """Approximate synthesis as a wideband filtered OFDM.

    The Doppler IDFT outputs are laid out as impulses on the T0/M grid
    (position ndot*M + m carries column m's value at pulse ndot) and the
    whole stream is convolved once with the elementary pulse.  Scaled by
    1/sqrt(N) to match the unit-energy pulse convention of the other paths.
    """
    p = params
    if p.N % 2 != 0:
        raise ValueError("the modem requires an even number of Doppler bins")
    if frame.data.shape != (p.M, p.N):
        raise ValueError(
            f"frame shape {frame.data.shape} does not match (M, N)=({p.M}, {p.N})"
        )
    if a.half_len_q != p.Q or a.rate != p.rate:
        raise ValueError("elementary pulse was built with different parameters")
    tones = _doppler_idft_all(frame)
    impulses = np.zeros(p.kappa * (p.M * p.N - 1) + 1, dtype=np.complex128)
    impulses[:: p.kappa] = tones.T.reshape(-1)
    out = fftconvolve(impulses, a.samples.astype(np.complex128)) / math.sqrt(p.N)
    wave = Waveform(out, p.rate, -p.Q * p.delta_t)
    return ModulatedFrame(waveform=wave, params=p, path=FILTERED)


def demodulate(y: Waveform, u: DdopPulse) -> SymbolFrame:
    """Correlate against every delay-Doppler shifted copy of the pulse.

    Y[m, n] is the inner product of y with the pulse delayed by m*T0/M and
    modulated by Doppler tone n.  The received waveform must sit on the same
    sampling grid; samples outside its support count as zero.
    """
    p = u.params
    if p.N % 2 != 0:
        raise ValueError("the modem requires an even number of Doppler bins")
    if not u.normalized:
        raise ValueError("demodulation uses the unit-energy pulse; build with normalized=True")
    base = sample_offset(y, u.as_waveform())
    table = np.conj(_doppler_phase_table(p, u.times()))
    n_pulse = len(u.samples)
    pulse_conj = np.conj(u.samples)
    data = np.zeros((p.M, p.N), dtype=np.complex128)
    for m in range(p.M):
        d = base + m * p.kappa
        lo = max(0, d)
        hi = min(len(y.samples), d + n_pulse)
        if hi <= lo:
            continue
        seg = y.samples[lo:hi] * pulse_conj[lo - d : hi - d]
        data[m, :] = (table[:, lo - d : hi - d] @ seg) / y.rate
    return SymbolFrame(data)
