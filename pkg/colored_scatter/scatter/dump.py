"""Binary dump of a sampled field for offline inspection.

Layout, all little-endian:

    offset  type        content
    0       4 bytes     magic b"CSFD"
    4       uint16      format version (1)
    6       uint16      bounce flag (0 multi, 1 single)
    8       uint32      grid size K
    12      uint32      rows R (receive support nodes)
    16      uint32      columns C (transmit support nodes)
    20      int32[R]    receive grid indices k
    ..      int32[C]    transmit grid indices l
    ..      uint8[R*C]  support mask, row-major
    ..      complex64[R*C]  field values, row-major (real, imaginary pairs)
"""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from colored_scatter.errors import FieldDumpError
from colored_scatter.scatter.field import Bounce, ScatterField

logger = logging.getLogger(__name__)

MAGIC = b"CSFD"
VERSION = 1
_HEADER = np.dtype(
    [
        ("magic", "S4"),
        ("version", "<u2"),
        ("bounce", "<u2"),
        ("grid_k", "<u4"),
        ("rows", "<u4"),
        ("cols", "<u4"),
    ]
)


def write_field_dump(field: ScatterField, path: Path) -> int:
    """Write a field to ``path``; returns the number of bytes written."""
    rows, cols = field.shape
    header = np.zeros(1, dtype=_HEADER)
    header[0] = (MAGIC, VERSION, int(field.bounce is Bounce.SINGLE), field.grid_k, rows, cols)
    payload = b"".join(
        [
            header.tobytes(),
            field.rx_indices.astype("<i4").tobytes(),
            field.tx_indices.astype("<i4").tobytes(),
            field.mask.astype("u1").tobytes(order="C"),
            field.values.astype("<c8").tobytes(order="C"),
        ]
    )
    path = Path(path)
    path.write_bytes(payload)
    logger.debug(f"Wrote {rows}x{cols} field dump to {path} ({len(payload)} bytes)")
    return len(payload)


def read_field_dump(path: Path) -> ScatterField:
    """Read a dump written by :func:`write_field_dump`.

    Values come back in single precision.

    Raises:
        FieldDumpError: On a bad magic, version or length
    """
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.itemsize:
        raise FieldDumpError(str(path), "file shorter than the header")
    header = np.frombuffer(data, dtype=_HEADER, count=1)[0]
    if bytes(header["magic"]) != MAGIC:
        raise FieldDumpError(str(path), "bad magic")
    if int(header["version"]) != VERSION:
        raise FieldDumpError(str(path), f"unsupported version {int(header['version'])}")

    rows, cols = int(header["rows"]), int(header["cols"])
    expected = _HEADER.itemsize + 4 * (rows + cols) + rows * cols * (1 + 8)
    if len(data) != expected:
        raise FieldDumpError(str(path), f"expected {expected} bytes, found {len(data)}")

    offset = _HEADER.itemsize
    rx = np.frombuffer(data, dtype="<i4", count=rows, offset=offset).astype(np.int64)
    offset += 4 * rows
    tx = np.frombuffer(data, dtype="<i4", count=cols, offset=offset).astype(np.int64)
    offset += 4 * cols
    mask = np.frombuffer(data, dtype="u1", count=rows * cols, offset=offset).astype(bool)
    offset += rows * cols
    values = np.frombuffer(data, dtype="<c8", count=rows * cols, offset=offset)

    return ScatterField(
        values=values.reshape(rows, cols).astype(np.complex128),
        rx_indices=rx,
        tx_indices=tx,
        mask=mask.reshape(rows, cols),
        grid_k=int(header["grid_k"]),
        bounce=Bounce.SINGLE if int(header["bounce"]) else Bounce.MULTI,
    )
