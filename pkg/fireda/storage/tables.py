"""CSV tables and JSON reports written by the experiment workflows."""

import csv
import json
import logging
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from fireda.models.report import CycleReport
from fireda.models.wave import Trajectory

logger = logging.getLogger(__name__)

METRICS_FILE = "metrics.csv"
TIMING_FILE = "timing.csv"
CALIBRATION_REPORT_FILE = "calibration_report.json"
HEAT_BALANCE_FILE = "heat_balance.csv"


def _prepare(path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    return target


def write_rows(path: str | Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Write a CSV file with a header row.

    Args:
        path: Destination file
        header: Column names
        rows: Row values, written with repr() for floats

    Returns:
        Path written
    """
    target = _prepare(path)
    with target.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(float(v)) if isinstance(v, float) else v for v in row])
    logger.debug("Wrote %s", target)
    return target


def write_metrics(reports: Sequence[CycleReport], path: str | Path) -> Path:
    """Deterministic per-cycle metrics table."""
    target = _prepare(path)
    with target.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CycleReport.METRIC_COLUMNS)
        for report in reports:
            writer.writerow(report.metric_row())
    return target


def write_timing(reports: Sequence[CycleReport], path: str | Path) -> Path:
    """Wall-clock seconds per cycle."""
    return write_rows(path, ("cycle", "wall_time"), ((r.cycle, r.wall_time) for r in reports))


def read_table(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Read a CSV file as a header and string rows.

    Raises:
        OSError: If the file cannot be read
    """
    with Path(path).open(newline="") as f:
        rows = list(csv.reader(f))
    if not rows:
        return [], []
    return rows[0], rows[1:]


def write_trajectory(trajectory: Trajectory, path: str | Path) -> Path:
    """Long-format 1D trajectory table with columns time, x, T, S."""
    rows = []
    for state in trajectory.states:
        x = state.grid.x
        for i in range(state.grid.nx):
            rows.append((state.time, float(x[i]), float(state.T[i]), float(state.S[i])))
    return write_rows(path, ("time", "x", "T", "S"), rows)


def write_points(points: npt.NDArray[np.float64], path: str | Path) -> Path:
    """Contour point list with columns x, y."""
    return write_rows(path, ("x", "y"), ((float(x), float(y)) for x, y in points))


def write_sensor(
    times: npt.NDArray[np.float64], temperatures: npt.NDArray[np.float64], path: str | Path
) -> Path:
    """Time-temperature record of a sensor."""
    rows = zip(times.tolist(), temperatures.tolist(), strict=True)
    return write_rows(path, ("time", "T"), rows)


def _to_json(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def write_json(data: dict[str, Any], path: str | Path) -> Path:
    """Pretty-printed JSON report."""
    target = _prepare(path)
    target.write_text(json.dumps(data, indent=2, default=_to_json) + "\n")
    return target


def read_json(path: str | Path) -> dict[str, Any]:
    """Read a JSON report."""
    data: dict[str, Any] = json.loads(Path(path).read_text())
    return data
