"""Serialization for generated series: packed bits, plain lines, CSV.

The packed-bit format is self-describing: an 8-byte magic, an 8-byte
little-endian symbol count, then the symbols packed LSB-first eight per byte.
The explicit count makes a partial final byte unambiguous, and the format
round-trips bit-exactly (see checksum_bytes).
"""

from __future__ import annotations

import hashlib
import struct

import numpy as np

MAGIC = b"LRDBITS\x00"

__all__ = [
    "MAGIC",
    "write_bits",
    "read_bits",
    "write_lines",
    "read_lines",
    "write_csv",
    "read_csv",
    "checksum_bytes",
    "series_checksum",
]


def write_bits(fobj, symbols) -> None:
    """Write binary symbols to an open binary-mode file object."""
    sym = np.ascontiguousarray(symbols, dtype=np.uint8)
    if sym.ndim != 1:
        raise ValueError("symbols must be one-dimensional")
    if sym.size and sym.max() > 1:
        raise ValueError("packed-bit output requires 0/1 symbols")
    fobj.write(MAGIC)
    fobj.write(struct.pack("<Q", sym.size))
    fobj.write(np.packbits(sym, bitorder="little").tobytes())


def read_bits(fobj) -> np.ndarray:
    """Read a packed-bit stream back into a uint8 0/1 array."""
    magic = fobj.read(len(MAGIC))
    if magic != MAGIC:
        raise ValueError(f"not a packed-bit stream (magic {magic!r})")
    header = fobj.read(8)
    if len(header) != 8:
        raise ValueError("truncated packed-bit header")
    (count,) = struct.unpack("<Q", header)
    n_bytes = (count + 7) // 8
    payload = fobj.read(n_bytes)
    if len(payload) != n_bytes:
        raise ValueError(
            f"truncated packed-bit payload: expected {n_bytes} bytes, "
            f"got {len(payload)}"
        )
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")
    return bits[:count]


def write_lines(fobj, values) -> None:
    """One ASCII value per line; integers stay integers."""
    arr = np.asarray(values)
    if np.issubdtype(arr.dtype, np.integer):
        fobj.writelines(f"{v}\n" for v in arr.tolist())
    else:
        fobj.writelines(f"{v!r}\n" for v in arr.tolist())


def read_lines(fobj) -> np.ndarray:
    values = [float(line) for line in fobj if line.strip()]
    if not values:
        raise ValueError("no values found in input")
    return np.asarray(values, dtype=np.float64)


def write_csv(fobj, values) -> None:
    """Two-column CSV with an index,value header; '.' decimal separator."""
    fobj.write("index,value\n")
    arr = np.asarray(values)
    if np.issubdtype(arr.dtype, np.integer):
        fobj.writelines(f"{i},{v}\n" for i, v in enumerate(arr.tolist()))
    else:
        fobj.writelines(f"{i},{v!r}\n" for i, v in enumerate(arr.tolist()))


def read_csv(fobj) -> np.ndarray:
    header = fobj.readline()
    if not header.lower().startswith("index,"):
        raise ValueError("CSV input must start with an index,value header")
    values = []
    for line in fobj:
        line = line.strip()
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"malformed CSV row: {line!r}")
        values.append(float(parts[1]))
    if not values:
        raise ValueError("no values found in CSV input")
    return np.asarray(values, dtype=np.float64)


def checksum_bytes(data: bytes) -> str:
    """64-bit BLAKE2b digest as 16 hex characters."""
    return hashlib.blake2b(data, digest_size=8).hexdigest()


def series_checksum(values) -> str:
    """Canonical checksum of a symbol or value stream.

    Integral sequences hash as uint8 (0/1 symbols) or int64 regardless of the
    dtype they arrived in, so a stream read back from an ASCII format digests
    identically to the uint8 stream that produced it.  Non-integral streams
    hash IEEE float64 bytes.
    """
    arr = np.asarray(values)
    if not np.issubdtype(arr.dtype, np.integer):
        arr = np.ascontiguousarray(arr, dtype=np.float64)
        integral = arr.size > 0 and bool(
            np.all(np.isfinite(arr)) and np.all(arr == np.rint(arr))
            and np.all(np.abs(arr) < 2**62)
        )
        if not integral:
            return checksum_bytes(arr.tobytes())
        arr = arr.astype(np.int64)
    if arr.size and 0 <= arr.min() and arr.max() <= 1:
        canon = np.ascontiguousarray(arr, dtype=np.uint8)
    else:
        canon = np.ascontiguousarray(arr, dtype=np.int64)
    return checksum_bytes(canon.tobytes())
