"""Test fixtures for fireda tests."""

import json
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from fireda.models import FireState, Grid, ModelCoefficients

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


@pytest.fixture
def grass_coefficients() -> ModelCoefficients:
    """Create the calibrated coefficient set of the grass fire.

    Returns:
        Linear-diffusion coefficients with T_a = 300 K
    """
    return ModelCoefficients(k=0.2136, A=187.93, B=558.49, C=4.8372e-5, C_S=0.1625, T_a=300.0)


@pytest.fixture
def line_grid() -> Grid:
    """Create a small 1D grid."""
    return Grid.line(nx=101, dx=2.0)


@pytest.fixture
def plane_grid() -> Grid:
    """Create a small 2D grid."""
    return Grid.plane(nx=21, ny=17, dx=2.0)


@pytest.fixture
def burning_line_state(line_grid: Grid) -> FireState:
    """Create a 1D state with a hot Gaussian bump in the middle."""
    T = 300.0 + 1200.0 * np.exp(-((line_grid.x - 100.0) ** 2) / 200.0)
    return FireState(T=T, S=np.ones(line_grid.shape), grid=line_grid)


@pytest.fixture
def random_plane_state(plane_grid: Grid) -> FireState:
    """Create a 2D state with random temperature and fuel."""
    rng = np.random.default_rng(3)
    return FireState(
        T=300.0 + 600.0 * rng.random(plane_grid.shape),
        S=rng.random(plane_grid.shape),
        grid=plane_grid,
    )


def small_twin_data(**assimilation: Any) -> dict[str, Any]:
    """Configuration dictionary of a small, fast twin experiment."""
    return {
        "name": "small_twin",
        "seed": 11,
        "grid": {"dims": 2, "nx": 21, "ny": 21, "dx": 2.0},
        "time": {"dt": 1.0},
        "model": {
            "k": 0.2136,
            "A": 187.93,
            "B": 558.49,
            "C": 4.8372e-5,
            "C_S": 0.1625,
            "T_a": 300.0,
        },
        "ignition": {"kind": "square", "temperature": 1200.0, "side": 10.0},
        "fuel": {"break_width": 0.0, "noise": 0.1},
        "ensemble": {"size": 5, "alpha": 2.0, "modes": 4, "c_T": 5.0, "c_x": 4.0, "c_y": 4.0},
        "assimilation": {
            "cycle_length": 5.0,
            "cycles": 2,
            "stride": 5,
            "variance": 10.0,
            "rho": 750.0,
            "reperturb": 0.05,
            "offset": 4.0,
            **assimilation,
        },
    }


def small_calibration_data() -> dict[str, Any]:
    """Configuration dictionary of a short 1D calibration run."""
    return {
        "name": "small_calibration",
        "grid": {"dims": 1, "nx": 201, "dx": 2.0},
        "time": {"dt": 0.5, "t_end": 100.0, "snapshot_every": 20},
        "model": {
            "k": 0.2136,
            "A": 187.93,
            "B": 558.49,
            "C": 4.8372e-5,
            "C_S": 0.1625,
            "T_a": 300.0,
        },
        "calibration": {"Ti": 670.0, "Tc": 1200.0, "t_c": 110.0, "sensor_x": 250.0},
        "ignition": {"kind": "gaussian", "temperature": 1200.0},
    }


def write_config(data: dict[str, Any], directory: Path, name: str = "config.json") -> Path:
    """Write a configuration dictionary as a JSON file."""
    path = directory / name
    path.write_text(json.dumps(data))
    return path
