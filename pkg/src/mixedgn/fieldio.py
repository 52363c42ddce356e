"""Binary field files (format "FLD1").

Layout, all little-endian::

    0-3    magic b"FLD1"
    4      version (1)
    5      dim
    6-7    reserved, zero
    ...    dim x uint32 samples per axis
    ...    float64 half-width L
    ...    n^dim float64 values, row-major
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import FieldFormatError, ParameterError
from .field import Field, GridSpec

MAGIC = b"FLD1"
VERSION = 1
_PREFIX = struct.Struct("<4sBBH")


def save_field(u: Field, path) -> None:
    g = u.grid
    header = _PREFIX.pack(MAGIC, VERSION, g.dim, 0)
    header += struct.pack(f"<{g.dim}I", *g.shape) + struct.pack("<d", g.half_width)
    payload = np.ascontiguousarray(u.values, dtype="<f8").tobytes()
    Path(path).write_bytes(header + payload)


def load_field(path) -> Field:
    data = Path(path).read_bytes()
    if len(data) < _PREFIX.size:
        raise FieldFormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, version, dim, reserved = _PREFIX.unpack_from(data, 0)
    if magic != MAGIC:
        raise FieldFormatError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise FieldFormatError(f"{path}: unsupported version {version}")
    if reserved != 0:
        raise FieldFormatError(f"{path}: reserved header bytes are not zero")
    off = _PREFIX.size
    need = off + 4 * dim + 8
    if len(data) < need:
        raise FieldFormatError(f"{path}: truncated header")
    shape = struct.unpack_from(f"<{dim}I", data, off)
    (L,) = struct.unpack_from("<d", data, off + 4 * dim)
    if len(set(shape)) != 1:
        raise FieldFormatError(f"{path}: non-cubic grid {shape}")
    count = int(np.prod(shape, dtype=np.int64))
    if len(data) != need + 8 * count:
        raise FieldFormatError(f"{path}: expected {count} values, file holds {(len(data) - need) / 8:g}")
    try:
        grid = GridSpec(shape[0], L, dim)
    except ParameterError as exc:
        raise FieldFormatError(f"{path}: invalid grid in header: {exc}") from exc
    values = np.frombuffer(data, dtype="<f8", count=count, offset=need)
    try:
        return Field(grid, values.astype(np.float64))
    except ParameterError as exc:
        raise FieldFormatError(f"{path}: {exc}") from exc
