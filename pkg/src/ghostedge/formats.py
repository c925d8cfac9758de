"""Binary file formats for patterns, measurements and images.

GIPT (pattern stack)::

    b"GIPT" | u8 version=1 | u8 dtype | u32 M | u32 rows | u32 cols | payload

``dtype`` 0 stores each pattern as ``rows * cols`` bits, row-major,
most-significant bit first, zero-padded to a whole byte per pattern.
``dtype`` 1 stores little-endian float32 values, pattern-major then row-major.

GIMS (measurement vector)::

    b"GIMS" | u8 version=1 | u32 M | M x f64

All integers and floats are little-endian. Images use binary PGM (P5) with
8- or 16-bit samples (16-bit samples big-endian, as netpbm requires).
"""
from __future__ import annotations

import os
import struct

import numpy as np

from .core import GhostImagingError, Image, MeasurementVector, ParameterError, PatternStack, as_image

GIPT_MAGIC = b"GIPT"
GIMS_MAGIC = b"GIMS"
VERSION = 1
DTYPE_PACKED_BITS = 0
DTYPE_FLOAT32 = 1

_GIPT_HEADER = struct.Struct("<4sBBIII")
_GIMS_HEADER = struct.Struct("<4sBI")


class FormatError(GhostImagingError, OSError):
    """A file does not follow the expected layout."""


def _read_bytes(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _write_bytes(path, data: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(data)


def encode_patterns(stack: PatternStack, dtype: int | None = None) -> bytes:
    """Serialize a stack; binary stacks default to packed bits, others to float32."""
    if dtype is None:
        dtype = DTYPE_PACKED_BITS if stack.is_binary else DTYPE_FLOAT32
    header = _GIPT_HEADER.pack(GIPT_MAGIC, VERSION, dtype, stack.count, stack.rows, stack.cols)
    flat = stack.patterns.reshape(stack.count, -1)
    if dtype == DTYPE_PACKED_BITS:
        if not stack.is_binary:
            raise ParameterError("packed-bit encoding requires a binary pattern stack")
        payload = np.packbits(flat.astype(np.uint8), axis=1, bitorder="big").tobytes()
    elif dtype == DTYPE_FLOAT32:
        payload = flat.astype("<f4").tobytes()
    else:
        raise ParameterError(f"unknown GIPT dtype {dtype}")
    return header + payload


def decode_patterns(data: bytes) -> PatternStack:
    if len(data) < _GIPT_HEADER.size:
        raise FormatError("truncated GIPT header")
    magic, version, dtype, m, rows, cols = _GIPT_HEADER.unpack_from(data)
    if magic != GIPT_MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {GIPT_MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported GIPT version {version}")
    k = rows * cols
    body = memoryview(data)[_GIPT_HEADER.size:]
    if dtype == DTYPE_PACKED_BITS:
        row_bytes = (k + 7) // 8
        if len(body) != m * row_bytes:
            raise FormatError(f"GIPT payload is {len(body)} bytes, expected {m * row_bytes}")
        packed = np.frombuffer(body, dtype=np.uint8).reshape(m, row_bytes)
        flat = np.unpackbits(packed, axis=1, count=k, bitorder="big")
    elif dtype == DTYPE_FLOAT32:
        if len(body) != 4 * m * k:
            raise FormatError(f"GIPT payload is {len(body)} bytes, expected {4 * m * k}")
        flat = np.frombuffer(body, dtype="<f4").astype(np.float32)
    else:
        raise FormatError(f"unknown GIPT dtype {dtype}")
    return PatternStack(flat.reshape(m, rows, cols))


def save_patterns(path, stack: PatternStack, dtype: int | None = None) -> None:
    _write_bytes(path, encode_patterns(stack, dtype))


def load_patterns(path) -> PatternStack:
    return decode_patterns(_read_bytes(path))


def encode_measurements(y: MeasurementVector) -> bytes:
    return _GIMS_HEADER.pack(GIMS_MAGIC, VERSION, len(y)) + y.values.astype("<f8").tobytes()


def decode_measurements(data: bytes) -> MeasurementVector:
    if len(data) < _GIMS_HEADER.size:
        raise FormatError("truncated GIMS header")
    magic, version, m = _GIMS_HEADER.unpack_from(data)
    if magic != GIMS_MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected {GIMS_MAGIC!r}")
    if version != VERSION:
        raise FormatError(f"unsupported GIMS version {version}")
    body = data[_GIMS_HEADER.size:]
    if len(body) != 8 * m:
        raise FormatError(f"GIMS payload is {len(body)} bytes, expected {8 * m}")
    return MeasurementVector(np.frombuffer(body, dtype="<f8"))


def save_measurements(path, y: MeasurementVector) -> None:
    _write_bytes(path, encode_measurements(y))


def load_measurements(path) -> MeasurementVector:
    return decode_measurements(_read_bytes(path))


def _pgm_tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """First ``count`` header tokens and the offset just past the separator."""
    tokens = []
    pos = 0
    n = len(data)
    while len(tokens) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header")
        tokens.append(data[start:pos])
    # exactly one whitespace byte separates the header from the raster
    return tokens, pos + 1


def decode_pgm(data: bytes) -> tuple[np.ndarray, int]:
    """Parse a binary PGM; returns the integer raster and its maxval."""
    tokens, offset = _pgm_tokens(data, 4)
    if tokens[0] != b"P5":
        raise FormatError(f"not a binary PGM (magic {tokens[0]!r})")
    try:
        cols, rows, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError("malformed PGM header") from None
    if cols < 1 or rows < 1 or not 0 < maxval < 65536:
        raise FormatError(f"invalid PGM header {cols}x{rows} maxval {maxval}")
    dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
    size = rows * cols * dtype.itemsize
    body = data[offset:offset + size]
    if len(body) != size:
        raise FormatError(f"PGM raster is {len(body)} bytes, expected {size}")
    raster = np.frombuffer(body, dtype=dtype).reshape(rows, cols)
    if raster.max() > maxval:
        raise FormatError("PGM sample exceeds maxval")
    return raster.astype(np.uint8 if maxval < 256 else np.uint16), maxval


def encode_pgm(raster: np.ndarray, maxval: int) -> bytes:
    raster = np.asarray(raster)
    rows, cols = raster.shape
    header = f"P5\n{cols} {rows}\n{maxval}\n".encode("ascii")
    dtype = "u1" if maxval < 256 else ">u2"
    return header + raster.astype(dtype).tobytes()


def quantize(img, bits: int = 16) -> np.ndarray:
    """Round ``[0, 1]`` intensities to integer codes of the given depth."""
    if bits not in (8, 16):
        raise ParameterError(f"PGM depth must be 8 or 16 bits, got {bits}")
    maxval = (1 << bits) - 1
    px = np.clip(as_image(img).pixels, 0.0, 1.0)
    return np.rint(px * maxval).astype(np.uint8 if bits == 8 else np.uint16)


def read_pgm(path) -> Image:
    """Load a PGM and normalize it by its maxval onto ``[0, 1]``."""
    raster, maxval = decode_pgm(_read_bytes(path))
    return Image.from_integer_raster(raster, maxval)


def write_pgm(path, img, bits: int = 16) -> None:
    """Write ``[0, 1]`` intensities as a P5 PGM; values outside are clipped."""
    _write_bytes(path, encode_pgm(quantize(img, bits), (1 << bits) - 1))


def write_raster_pgm(path, raster: np.ndarray) -> None:
    """Write an existing 8-bit raster unchanged."""
    _write_bytes(path, encode_pgm(np.asarray(raster, dtype=np.uint8), 255))


def ensure_parent(path) -> None:
    parent = os.path.dirname(os.fspath(path))
    if parent:
        os.makedirs(parent, exist_ok=True)
