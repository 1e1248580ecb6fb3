"""Unit tests for snapshot files and result tables."""

import csv
import math
from pathlib import Path

import numpy as np
import pytest

from fireda.models import CycleReport, FireState, Grid, Trajectory
from fireda.storage import snapshot, tables
from fireda.utils.errors import SnapshotFormatError
from tests.fixtures import burning_line_state, line_grid, plane_grid, random_plane_state


def test_snapshot_round_trip_2d(random_plane_state: FireState, tmp_path: Path) -> None:
    """Test that a 2D snapshot is read back bit for bit."""
    state = random_plane_state.replace(time=12.5)
    path = tmp_path / "nested" / "state.bin"
    snapshot.write_snapshot(state, path)
    assert snapshot.read_snapshot(path).same_as(state)


def test_snapshot_round_trip_1d(burning_line_state: FireState, tmp_path: Path) -> None:
    """Test that a 1D snapshot keeps its grid."""
    path = tmp_path / "line.bin"
    snapshot.write_snapshot(burning_line_state, path)
    restored = snapshot.read_snapshot(path)
    assert restored.grid == burning_line_state.grid
    assert restored.same_as(burning_line_state)


def test_snapshot_size_of_large_grid(tmp_path: Path) -> None:
    """Test that a 250 x 250 snapshot is a 48-byte header plus two fields."""
    grid = Grid.plane(nx=250, ny=250, dx=2.0)
    path = tmp_path / "big.bin"
    snapshot.write_snapshot(FireState.uniform(grid, T=300.0), path)
    assert snapshot.HEADER.size == 48
    assert path.stat().st_size == 48 + 2 * 250 * 250 * 8


def test_truncated_snapshot(random_plane_state: FireState, tmp_path: Path) -> None:
    """Test that a missing byte is detected."""
    path = tmp_path / "state.bin"
    snapshot.write_snapshot(random_plane_state, path)
    path.write_bytes(path.read_bytes()[:-1])
    with pytest.raises(SnapshotFormatError) as exc:
        snapshot.read_snapshot(path)
    assert exc.value.code == "SNAP_004"
    path.write_bytes(b"FIRE")
    with pytest.raises(SnapshotFormatError) as exc:
        snapshot.read_snapshot(path)
    assert exc.value.code == "SNAP_001"


def test_foreign_file_is_rejected(tmp_path: Path) -> None:
    """Test that a file without the magic bytes is refused."""
    path = tmp_path / "other.bin"
    path.write_bytes(b"\0" * 200)
    with pytest.raises(SnapshotFormatError) as exc:
        snapshot.read_snapshot(path)
    assert exc.value.code == "SNAP_002"


def test_invalid_header_is_rejected(tmp_path: Path) -> None:
    """Test that an impossible grid in the header is refused."""
    path = tmp_path / "bad.bin"
    path.write_bytes(snapshot.HEADER.pack(snapshot.MAGIC, 3, 10, 10, 1.0, 0.0))
    with pytest.raises(SnapshotFormatError) as exc:
        snapshot.read_snapshot(path)
    assert exc.value.code == "SNAP_003"


def test_missing_snapshot_raises_os_error(tmp_path: Path) -> None:
    """Test that an absent file surfaces as an I/O error."""
    with pytest.raises(OSError):
        snapshot.read_snapshot(tmp_path / "absent.bin")


def test_export_csv(plane_grid: Grid, tmp_path: Path) -> None:
    """Test one CSV row per node with exact values."""
    xx, _ = plane_grid.mesh()
    state = FireState(T=300.0 + xx / 3.0, S=np.full(plane_grid.shape, 0.5), grid=plane_grid)
    path = tmp_path / "state.csv"
    snapshot.export_csv(state, path)
    with path.open(newline="") as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["x", "y", "T", "S"]
    assert len(rows) == 1 + plane_grid.cells
    assert [float(v) for v in rows[2]] == [2.0, 0.0, 300.0 + 2.0 / 3.0, 0.5]
    assert float(rows[-1][1]) == plane_grid.length_y


def test_metrics_table(tmp_path: Path) -> None:
    """Test that metrics rows hold repr floats and no wall time."""
    reports = [
        CycleReport(1, 100.0, 12.5, 3.25, 4.0, math.inf, 7.0, wall_time=1.5),
        CycleReport(2, 200.0, 0.1, 0.2, 0.3, 0.4, 0.5, wall_time=2.5),
    ]
    metrics = tables.write_metrics(reports, tmp_path / tables.METRICS_FILE)
    header, rows = tables.read_table(metrics)
    assert header == list(CycleReport.METRIC_COLUMNS)
    assert rows[0] == ["1", "100.0", "12.5", "3.25", "4.0", "inf", "7.0"]
    assert "wall_time" not in header
    timing = tables.write_timing(reports, tmp_path / tables.TIMING_FILE)
    assert tables.read_table(timing) == (["cycle", "wall_time"], [["1", "1.5"], ["2", "2.5"]])


def test_trajectory_and_sensor_tables(burning_line_state: FireState, tmp_path: Path) -> None:
    """Test the long-format trajectory table and the sensor record."""
    trajectory = Trajectory((burning_line_state, burning_line_state.replace(time=1.0)))
    header, rows = tables.read_table(tables.write_trajectory(trajectory, tmp_path / "t.csv"))
    assert header == ["time", "x", "T", "S"]
    assert len(rows) == 2 * burning_line_state.grid.nx
    sensor = tables.write_sensor(np.array([0.0, 1.0]), np.array([300.0, 310.0]), tmp_path / "s.csv")
    assert tables.read_table(sensor)[1] == [["0.0", "300.0"], ["1.0", "310.0"]]


def test_json_report_handles_numpy(tmp_path: Path) -> None:
    """Test that numpy scalars and arrays are written as plain JSON."""
    path = tables.write_json(
        {"value": np.float64(1.5), "values": np.arange(3.0)}, tmp_path / "report.json"
    )
    assert tables.read_json(path) == {"value": 1.5, "values": [0.0, 1.0, 2.0]}


def test_empty_table(tmp_path: Path) -> None:
    """Test that an empty file reads as no header and no rows."""
    path = tmp_path / "empty.csv"
    path.write_text("")
    assert tables.read_table(path) == ([], [])
