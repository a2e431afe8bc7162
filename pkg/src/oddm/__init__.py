"""Delay-Doppler orthogonal pulse construction and ODDM waveform toolkit.

The package builds the delay-Doppler orthogonal pulse (a train of
root-Nyquist elementary pulses), synthesizes ODDM frames through three
modulator paths (direct sum, exact IDFT-based pulse-shaped OFDM, and the
approximate wideband filtered OFDM), verifies the pulse's grid
orthogonality through its ambiguity function, and provides a sampled
delay-Doppler channel with calibrated AWGN for loopback experiments.
"""

from .channel import (
    ChannelPath,
    ChannelSpec,
    NoiseSpec,
    add_noise,
    apply_channel,
    noise_density,
)
from .fileio import read_frame_json, read_iq, write_frame_json, write_iq
from .grid import (
    NMSE_FLOOR_DB,
    FrameDimensions,
    GridMismatchError,
    OddmParams,
    ParameterError,
    SymbolFrame,
    Waveform,
    fourier_transform,
    frame_dimensions,
    inner_product,
    nmse_db,
    sample_offset,
)
from .modem import (
    ModulatedFrame,
    demodulate,
    doppler_idft,
    modulate_direct,
    modulate_exact,
    modulate_filtered,
    random_qpsk_frame,
)
from .pulse import (
    DdopPulse,
    DdopSpectrum,
    ElementaryPulse,
    OrthogonalityReport,
    ambiguity,
    build_ddop_fourier,
    build_ddop_timedomain,
    ddop_spectrum_analytic,
    m_check,
    make_elementary_pulse,
    orthogonality_scan,
)

__version__ = "0.1.0"

__all__ = [
    "NMSE_FLOOR_DB",
    "ChannelPath",
    "ChannelSpec",
    "DdopPulse",
    "DdopSpectrum",
    "ElementaryPulse",
    "FrameDimensions",
    "GridMismatchError",
    "ModulatedFrame",
    "NoiseSpec",
    "OddmParams",
    "OrthogonalityReport",
    "ParameterError",
    "SymbolFrame",
    "Waveform",
    "add_noise",
    "ambiguity",
    "apply_channel",
    "build_ddop_fourier",
    "build_ddop_timedomain",
    "ddop_spectrum_analytic",
    "demodulate",
    "doppler_idft",
    "fourier_transform",
    "frame_dimensions",
    "inner_product",
    "m_check",
    "make_elementary_pulse",
    "modulate_direct",
    "modulate_exact",
    "modulate_filtered",
    "nmse_db",
    "noise_density",
    "orthogonality_scan",
    "random_qpsk_frame",
    "read_frame_json",
    "read_iq",
    "sample_offset",
    "write_frame_json",
    "write_iq",
]
