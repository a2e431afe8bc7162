"""On-disk formats: the binary IQ container and the symbol-frame JSON schema.

IQ layout (all little-endian):

    magic   4 bytes  b"ODDM"
    version u8       1
    count   u32      number of complex samples
    data    f64 x 2*count   interleaved re, im pairs
    rate    f64      samples per second
    t_start f64      time of sample 0 (trailer)

Frame JSON: {"M": .., "N": .., "re": [[..]], "im": [[..]], "n_index_order": ..}
where row m, column j holds X[m, n] with n = j - N//2 (the order note is
embedded so files stay self-describing).
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .grid import SymbolFrame, Waveform

IQ_MAGIC = b"ODDM"
IQ_VERSION = 1
N_INDEX_ORDER = "-N/2..N/2-1"


def write_iq(path: str | Path, wave: Waveform) -> None:
    samples = np.ascontiguousarray(wave.samples, dtype=np.complex128)
    payload = np.empty(2 * len(samples), dtype="<f8")
    payload[0::2] = samples.real
    payload[1::2] = samples.imag
    with open(path, "wb") as fh:
        fh.write(IQ_MAGIC)
        fh.write(struct.pack("<B", IQ_VERSION))
        fh.write(struct.pack("<I", len(samples)))
        fh.write(payload.tobytes())
        fh.write(struct.pack("<d", wave.rate))
        fh.write(struct.pack("<d", wave.t_start))


def read_iq(path: str | Path) -> Waveform:
    blob = Path(path).read_bytes()
    if blob[:4] != IQ_MAGIC:
        raise ValueError(f"{path}: not an IQ file (bad magic)")
    version = blob[4]
    if version != IQ_VERSION:
        raise ValueError(f"{path}: unsupported IQ version {version}")
    (count,) = struct.unpack_from("<I", blob, 5)
    expected = 9 + 16 * count + 16
    if len(blob) != expected:
        raise ValueError(f"{path}: truncated IQ file ({len(blob)} vs {expected} bytes)")
    flat = np.frombuffer(blob, dtype="<f8", count=2 * count, offset=9)
    rate, t_start = struct.unpack_from("<dd", blob, 9 + 16 * count)
    samples = flat[0::2] + 1j * flat[1::2]
    return Waveform(samples, rate, t_start)


def write_frame_json(path: str | Path, frame: SymbolFrame) -> None:
    doc = {
        "M": frame.M,
        "N": frame.N,
        "n_index_order": N_INDEX_ORDER,
        "re": frame.data.real.tolist(),
        "im": frame.data.imag.tolist(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_frame_json(path: str | Path) -> SymbolFrame:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}") from exc
    try:
        m_count, n_count = int(doc["M"]), int(doc["N"])
        re = np.asarray(doc["re"], dtype=float)
        im = np.asarray(doc["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed frame document: {exc}") from exc
    if re.shape != (m_count, n_count) or im.shape != (m_count, n_count):
        raise ValueError(
            f"{path}: re/im shapes {re.shape}/{im.shape} do not match M x N "
            f"({m_count} x {n_count})"
        )
    return SymbolFrame(re + 1j * im)
