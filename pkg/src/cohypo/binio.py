"""Little-endian binary I/O helpers for the artifact file formats.

All multi-byte integers are little-endian; arrays are raw contiguous dumps
of explicit-endianness numpy dtypes, so files are byte-stable across runs
and platforms.
"""

import json
import struct

import numpy as np

from cohypo.errors import InputFormatError


def write_u32(fh, value):
    fh.write(struct.pack("<I", value))


def write_u64(fh, value):
    fh.write(struct.pack("<Q", value))


def write_f64(fh, value):
    fh.write(struct.pack("<d", value))


def read_u32(fh):
    return struct.unpack("<I", _take(fh, 4))[0]


def read_u64(fh):
    return struct.unpack("<Q", _take(fh, 8))[0]


def read_f64(fh):
    return struct.unpack("<d", _take(fh, 8))[0]


def write_str(fh, text):
    data = text.encode("utf-8")
    write_u32(fh, len(data))
    fh.write(data)


def read_str(fh):
    n = read_u32(fh)
    return _take(fh, n).decode("utf-8")


def write_str_table(fh, strings):
    write_u32(fh, len(strings))
    for s in strings:
        write_str(fh, s)


def read_str_table(fh):
    n = read_u32(fh)
    return [read_str(fh) for _ in range(n)]


def write_array(fh, arr, dtype):
    arr = np.ascontiguousarray(arr, dtype=dtype)
    write_u64(fh, arr.size)
    fh.write(arr.tobytes())


def read_array(fh, dtype):
    n = read_u64(fh)
    dtype = np.dtype(dtype)
    return np.frombuffer(_take(fh, n * dtype.itemsize), dtype=dtype).copy()


def write_json_blob(fh, obj):
    data = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")
    write_u32(fh, len(data))
    fh.write(data)


def read_json_blob(fh):
    n = read_u32(fh)
    return json.loads(_take(fh, n).decode("utf-8"))


def expect_magic(fh, magic, path=None):
    got = fh.read(len(magic))
    if got != magic:
        raise InputFormatError(
            f"bad magic bytes {got!r}, expected {magic!r}", path=path
        )


def _take(fh, n):
    data = fh.read(n)
    if len(data) != n:
        raise InputFormatError(f"truncated file: wanted {n} bytes, got {len(data)}")
    return data
