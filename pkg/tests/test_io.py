"""Serialization formats: bit packing, ASCII lines, CSV, checksums."""
import io
import struct

import numpy as np
import pytest

from lrdkit.io import (
    MAGIC,
    checksum_bytes,
    read_bits,
    read_csv,
    read_lines,
    series_checksum,
    write_bits,
    write_csv,
    write_lines,
)


class TestBits:
    @pytest.mark.parametrize("n", [1, 7, 8, 9, 64, 1000, 10_001])
    def test_round_trip(self, n):
        sym = np.random.default_rng(n).integers(0, 2, n).astype(np.uint8)
        buf = io.BytesIO()
        write_bits(buf, sym)
        buf.seek(0)
        np.testing.assert_array_equal(read_bits(buf), sym)

    def test_exact_bytes(self):
        # LSB-first packing: [1,0,0,0,0,0,0,0,1] -> 0x01 0x01
        buf = io.BytesIO()
        write_bits(buf, np.array([1, 0, 0, 0, 0, 0, 0, 0, 1], dtype=np.uint8))
        raw = buf.getvalue()
        assert raw[:8] == MAGIC
        assert struct.unpack("<Q", raw[8:16]) == (9,)
        assert raw[16:] == b"\x01\x01"

    def test_partial_byte_unambiguous(self):
        # trailing pad bits must not come back as symbols
        sym = np.array([1, 1, 1], dtype=np.uint8)
        buf = io.BytesIO()
        write_bits(buf, sym)
        buf.seek(0)
        out = read_bits(buf)
        assert out.size == 3
        np.testing.assert_array_equal(out, sym)

    def test_bad_magic(self):
        with pytest.raises(ValueError):
            read_bits(io.BytesIO(b"NOTBITS\x00" + b"\x00" * 9))

    def test_truncated_header(self):
        with pytest.raises(ValueError):
            read_bits(io.BytesIO(MAGIC + b"\x04\x00"))

    def test_truncated_payload(self):
        buf = io.BytesIO()
        write_bits(buf, np.ones(100, dtype=np.uint8))
        clipped = buf.getvalue()[:-5]
        with pytest.raises(ValueError):
            read_bits(io.BytesIO(clipped))

    def test_rejects_non_binary(self):
        with pytest.raises(ValueError):
            write_bits(io.BytesIO(), np.array([0, 1, 2], dtype=np.uint8))
        with pytest.raises(ValueError):
            write_bits(io.BytesIO(), np.zeros((2, 2), dtype=np.uint8))


class TestLines:
    def test_integers_stay_integers(self):
        buf = io.StringIO()
        write_lines(buf, np.array([0, 1, 1, 0], dtype=np.uint8))
        assert buf.getvalue() == "0\n1\n1\n0\n"

    def test_float_round_trip_exact(self):
        vals = np.random.default_rng(1).standard_normal(100)
        buf = io.StringIO()
        write_lines(buf, vals)
        buf.seek(0)
        np.testing.assert_array_equal(read_lines(buf), vals)

    def test_blank_lines_skipped(self):
        assert read_lines(io.StringIO("1\n\n2\n \n3\n")).tolist() == [1.0, 2.0, 3.0]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            read_lines(io.StringIO(""))


class TestCsv:
    def test_round_trip(self):
        vals = np.random.default_rng(2).standard_normal(50)
        buf = io.StringIO()
        write_csv(buf, vals)
        buf.seek(0)
        np.testing.assert_array_equal(read_csv(buf), vals)

    def test_header_and_decimal_point(self):
        buf = io.StringIO()
        write_csv(buf, np.array([1.5, 2.0]))
        text = buf.getvalue()
        assert text.startswith("index,value\n")
        assert "0,1.5\n" in text
        assert ";" not in text

    def test_integer_column(self):
        buf = io.StringIO()
        write_csv(buf, np.array([0, 1], dtype=np.int64))
        assert buf.getvalue() == "index,value\n0,0\n1,1\n"

    def test_missing_header(self):
        with pytest.raises(ValueError):
            read_csv(io.StringIO("0,1.5\n"))

    def test_malformed_row(self):
        with pytest.raises(ValueError):
            read_csv(io.StringIO("index,value\n0,1.5,9\n"))

    def test_empty_body(self):
        with pytest.raises(ValueError):
            read_csv(io.StringIO("index,value\n"))


class TestChecksums:
    def test_frozen_digests(self):
        assert checksum_bytes(b"") == "e4a6a0577479b2b4"
        assert checksum_bytes(b"abc") == "d8bb14d833d59559"

    def test_symbols_digest_dtype_independent(self):
        # 0/1 content hashes identically as uint8, int64, or integral float64
        a = np.array([0, 1, 1, 0, 1], dtype=np.uint8)
        assert series_checksum(a) == series_checksum(a.astype(np.int64))
        assert series_checksum(a) == series_checksum(a.astype(np.float64))

    def test_general_integers_canonical(self):
        a = np.array([0, 5, 212], dtype=np.int64)
        assert series_checksum(a) == series_checksum(a.astype(np.float64))
        assert series_checksum(a) != series_checksum(np.array([0, 5, 213]))

    def test_non_integral_floats(self):
        a = np.array([0.5, 1.5])
        assert series_checksum(a) != series_checksum(np.array([0.0, 2.0]))
        assert series_checksum(a) == series_checksum(a.copy())

    def test_round_trip_through_every_format(self):
        sym = np.random.default_rng(3).integers(0, 2, 1000).astype(np.uint8)
        want = series_checksum(sym)

        bits = io.BytesIO()
        write_bits(bits, sym)
        bits.seek(0)
        assert series_checksum(read_bits(bits)) == want

        lines = io.StringIO()
        write_lines(lines, sym)
        lines.seek(0)
        assert series_checksum(read_lines(lines)) == want

        csv = io.StringIO()
        write_csv(csv, sym)
        csv.seek(0)
        assert series_checksum(read_csv(csv)) == want
