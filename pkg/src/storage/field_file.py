from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from src.fields.models import Grid3, RSField

logger = logging.getLogger(__name__)

MAGIC = b"RSF1"
VERSION = 1

HEADER_DTYPE = np.dtype(
    [
        ("magic", "S4"),
        ("version", "<u4"),
        ("shape", "<u4", (3,)),
        ("spacing", "<f8", (3,)),
        ("origin", "<f8", (3,)),
        ("helicity", "<i4"),
    ]
)
PAYLOAD_DTYPE = np.dtype("<c16")
# bytes per grid point: three complex components
POINT_BYTES = 3 * PAYLOAD_DTYPE.itemsize
# refuse headers announcing payloads beyond this size
MAX_PAYLOAD_BYTES = 1 << 40


class FieldFileError(ValueError):
    """Raised for malformed, truncated or oversized field files."""


def encode_field(f: RSField) -> bytes:
    header = np.zeros((), dtype=HEADER_DTYPE)
    header["magic"] = MAGIC
    header["version"] = VERSION
    header["shape"] = f.grid.shape
    header["spacing"] = f.grid.spacing
    header["origin"] = f.grid.origin
    header["helicity"] = f.helicity_sign
    # x runs fastest on disk
    payload = np.ascontiguousarray(f.F.transpose(2, 1, 0, 3), dtype=PAYLOAD_DTYPE)
    return header.tobytes() + payload.tobytes()


def decode_field(data: bytes, source: str = "<bytes>") -> RSField:
    if len(data) < HEADER_DTYPE.itemsize:
        raise FieldFileError(
            f"{source}: header needs {HEADER_DTYPE.itemsize} bytes, file has {len(data)}"
        )
    header = np.frombuffer(data, dtype=HEADER_DTYPE, count=1)[0]
    magic = bytes(header["magic"])
    if magic != MAGIC:
        raise FieldFileError(f"{source}: bad magic {magic!r}, expected {MAGIC!r}")
    if int(header["version"]) != VERSION:
        raise FieldFileError(f"{source}: unsupported version {int(header['version'])}")

    nx, ny, nz = (int(n) for n in header["shape"])
    expected = nx * ny * nz * POINT_BYTES
    if min(nx, ny, nz) < 2 or expected > MAX_PAYLOAD_BYTES:
        raise FieldFileError(f"{source}: implausible grid dimensions {(nx, ny, nz)}")
    actual = len(data) - HEADER_DTYPE.itemsize
    if actual != expected:
        raise FieldFileError(
            f"{source}: payload has {actual} bytes, expected {expected} for grid {(nx, ny, nz)}"
        )

    helicity = int(header["helicity"])
    if helicity not in (1, -1):
        raise FieldFileError(f"{source}: helicity sign {helicity} is not +1 or -1")

    dx, dy, dz = (float(d) for d in header["spacing"])
    grid = Grid3(
        nx=nx, ny=ny, nz=nz, dx=dx, dy=dy, dz=dz,
        origin=tuple(float(o) for o in header["origin"]),
    )
    payload = np.frombuffer(data, dtype=PAYLOAD_DTYPE, offset=HEADER_DTYPE.itemsize)
    F = payload.reshape(nz, ny, nx, 3).transpose(2, 1, 0, 3).astype(np.complex128)
    return RSField(grid=grid, F=F, helicity_sign=helicity)


def write_field(f: RSField, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_field(f))
    logger.info("Wrote field %s to %s", f.grid.shape, path)


def read_field(path: str | Path) -> RSField:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise FieldFileError(f"{path}: cannot read field file: {exc.strerror}") from exc
    f = decode_field(data, source=str(path))
    logger.info("Read field %s from %s", f.grid.shape, path)
    return f
