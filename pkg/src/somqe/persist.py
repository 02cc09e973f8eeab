"""Binary map persistence (``SOMQE1``).

Layout::

    SOMQE1\n
    <rows> <cols> <dim>\n
    rows*cols*dim little-endian float64, node-major, components contiguous
"""

from __future__ import annotations

import os

import numpy as np

from .errors import FormatError
from .som import SomMap

MAGIC = b"SOMQE1"


def dumps_map(som: SomMap) -> bytes:
    header = MAGIC + b"\n" + f"{som.rows} {som.cols} {som.dim}\n".encode("ascii")
    return header + som.weights.astype("<f8").tobytes()


def loads_map(blob: bytes, topology: str = "rectangular") -> SomMap:
    first, sep, rest = blob.partition(b"\n")
    if first != MAGIC or not sep:
        raise FormatError(f"bad magic: expected {MAGIC.decode()!r}, got {first[:16]!r}")
    dims_line, sep, payload = rest.partition(b"\n")
    if not sep:
        raise FormatError("truncated header: missing dimension line")
    try:
        rows, cols, dim = (int(v) for v in dims_line.decode("ascii").split(" "))
    except ValueError:
        raise FormatError(f"bad dimension line {dims_line[:40]!r}") from None
    if rows < 1 or cols < 1 or dim < 1:
        raise FormatError(f"non-positive dimensions {rows} {cols} {dim}")
    expected = rows * cols * dim * 8
    if len(payload) != expected:
        offset = len(blob) - len(payload)
        raise FormatError(
            f"weight payload at byte {offset} has {len(payload)} bytes, expected {expected}")
    weights = np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(rows * cols, dim)
    return SomMap(rows, cols, weights, topology)


def save_map(som: SomMap, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(dumps_map(som))


def load_map(path: str | os.PathLike, topology: str = "rectangular") -> SomMap:
    with open(path, "rb") as fh:
        return loads_map(fh.read(), topology)
