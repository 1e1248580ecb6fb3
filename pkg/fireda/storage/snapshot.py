"""Binary snapshot files.

Layout (little-endian): 8-byte magic, int64 dims, nx, ny, float64 dx, time,
then T and S as row-major float64 arrays.
"""

import csv
import struct
from pathlib import Path

import numpy as np

from fireda.models.grid import Grid
from fireda.models.state import FireState
from fireda.utils.errors import SnapshotFormatError, ValidationError

MAGIC = b"FIRESNP1"
HEADER = struct.Struct("<8s3q2d")
VALUE_DTYPE = np.dtype("<f8")


def write_snapshot(state: FireState, path: str | Path) -> None:
    """Write a state to a binary snapshot file.

    Args:
        state: State to write
        path: Destination; parent directories are created
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    grid = state.grid
    header = HEADER.pack(MAGIC, grid.dims, grid.nx, grid.ny, grid.dx, state.time)
    with target.open("wb") as f:
        f.write(header)
        f.write(np.ascontiguousarray(state.T, dtype=VALUE_DTYPE).tobytes(order="C"))
        f.write(np.ascontiguousarray(state.S, dtype=VALUE_DTYPE).tobytes(order="C"))


def read_snapshot(path: str | Path) -> FireState:
    """Read a state written by write_snapshot.

    Args:
        path: Snapshot file

    Returns:
        The stored state, bit for bit

    Raises:
        OSError: If the file cannot be read
        SnapshotFormatError: If the magic, header or payload size is wrong
    """
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise SnapshotFormatError(
            f"{path}: truncated header ({len(data)} of {HEADER.size} bytes)", code="SNAP_001"
        )
    magic, dims, nx, ny, dx, time = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise SnapshotFormatError(f"{path}: not a fireda snapshot", code="SNAP_002")
    try:
        grid = Grid(dims=dims, nx=nx, ny=ny, dx=dx)
    except ValidationError as e:
        raise SnapshotFormatError(f"{path}: invalid header: {e.message}", code="SNAP_003") from e
    expected = HEADER.size + 2 * grid.cells * VALUE_DTYPE.itemsize
    if len(data) != expected:
        raise SnapshotFormatError(
            f"{path}: payload has {len(data)} bytes, header implies {expected}", code="SNAP_004"
        )
    values = np.frombuffer(data, dtype=VALUE_DTYPE, offset=HEADER.size)
    return FireState(
        T=values[: grid.cells].reshape(grid.shape).astype(np.float64),
        S=values[grid.cells :].reshape(grid.shape).astype(np.float64),
        grid=grid,
        time=time,
    )


def export_csv(state: FireState, path: str | Path) -> None:
    """Write one row per node with columns x, y, T, S."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    grid = state.grid
    if grid.dims == 1:
        xs = grid.x
        ys = np.zeros(grid.nx)
    else:
        xx, yy = grid.mesh()
        xs, ys = xx.ravel(), yy.ravel()
    with target.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["x", "y", "T", "S"])
        for row in zip(xs, ys, state.T.ravel(), state.S.ravel(), strict=True):
            writer.writerow([repr(float(value)) for value in row])
