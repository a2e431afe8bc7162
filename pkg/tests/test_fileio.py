"""Binary IQ container and frame JSON schema, pinned byte for byte."""

import json
import struct

import numpy as np
import pytest

from oddm import SymbolFrame, Waveform, read_frame_json, read_iq, write_frame_json, write_iq


class TestIqFile:
    def test_golden_layout(self, tmp_path):
        wave = Waveform(np.array([1.0 + 2.0j, -0.5j, 3.0]), rate=8.0, t_start=-0.25)
        path = tmp_path / "golden.iq"
        write_iq(path, wave)
        expected = (
            b"ODDM"
            + struct.pack("<B", 1)
            + struct.pack("<I", 3)
            + struct.pack("<6d", 1.0, 2.0, 0.0, -0.5, 3.0, 0.0)
            + struct.pack("<d", 8.0)
            + struct.pack("<d", -0.25)
        )
        assert path.read_bytes() == expected

    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        wave = Waveform(
            rng.standard_normal(100) + 1j * rng.standard_normal(100),
            rate=1234.5,
            t_start=0.0625,
        )
        path = tmp_path / "w.iq"
        write_iq(path, wave)
        back = read_iq(path)
        np.testing.assert_array_equal(back.samples, wave.samples)
        assert back.rate == wave.rate
        assert back.t_start == wave.t_start

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.iq"
        path.write_bytes(b"JUNKxxxxxxxxxxxxxxxxx")
        with pytest.raises(ValueError, match="magic"):
            read_iq(path)

    def test_bad_version(self, tmp_path):
        path = tmp_path / "ver.iq"
        path.write_bytes(b"ODDM" + struct.pack("<B", 9) + struct.pack("<I", 0) + struct.pack("<dd", 1.0, 0.0))
        with pytest.raises(ValueError, match="version"):
            read_iq(path)

    def test_truncated(self, tmp_path):
        wave = Waveform(np.ones(4, dtype=complex), rate=2.0)
        path = tmp_path / "t.iq"
        write_iq(path, wave)
        path.write_bytes(path.read_bytes()[:-3])
        with pytest.raises(ValueError, match="truncated"):
            read_iq(path)


class TestFrameJson:
    def test_round_trip_and_order_note(self, tmp_path):
        rng = np.random.default_rng(1)
        frame = SymbolFrame(rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6)))
        path = tmp_path / "frame.json"
        write_frame_json(path, frame)
        doc = json.loads(path.read_text())
        assert doc["M"] == 4 and doc["N"] == 6
        assert doc["n_index_order"] == "-N/2..N/2-1"
        back = read_frame_json(path)
        np.testing.assert_array_equal(back.data, frame.data)

    def test_shape_mismatch_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(json.dumps({"M": 2, "N": 2, "re": [[1.0, 2.0]], "im": [[0.0, 0.0]]}))
        with pytest.raises(ValueError, match="shapes"):
            read_frame_json(path)

    def test_malformed_rejected(self, tmp_path):
        path = tmp_path / "junk.json"
        path.write_text("{oops")
        with pytest.raises(ValueError, match="JSON"):
            read_frame_json(path)
        path.write_text(json.dumps({"M": 2}))
        with pytest.raises(ValueError, match="malformed"):
            read_frame_json(path)
