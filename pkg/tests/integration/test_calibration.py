"""Integration tests for the 1D calibration workflow."""

from pathlib import Path

import numpy as np
import pytest

from fireda.config import WaveConfig, load_config, parse_config
from fireda.models import FireState, Grid, ModelCoefficients, Trajectory
from fireda.services import kinetics, solver
from fireda.services.experiments import (
    STATUS_LEFT_DOMAIN,
    STATUS_NO_WAVE,
    STATUS_OK,
    calibrate,
    measure_or_none,
    run_calibrate_1d,
)
from fireda.storage import tables
from fireda.utils.errors import ConfigError
from tests.fixtures import (
    CONFIG_DIR,
    grass_coefficients,
    small_calibration_data,
    small_twin_data,
)


def test_calibration_writes_outputs(tmp_path: Path) -> None:
    """Test that the workflow writes its report and tables."""
    data = small_calibration_data()
    data["output"] = {"directory": str(tmp_path)}
    report = run_calibrate_1d(parse_config(data))
    assert report.status in (STATUS_OK, STATUS_NO_WAVE)
    assert report.identified_B == pytest.approx(558.5, rel=1e-3)
    assert report.identified_A == pytest.approx(15.218, rel=1e-3)
    assert report.equilibria.is_bistable
    saved = tables.read_json(tmp_path / tables.CALIBRATION_REPORT_FILE)
    assert saved["status"] == report.status
    assert saved["coefficients"]["diffusion"] == "linear"
    header, rows = tables.read_table(tmp_path / "wave.csv")
    assert header == ["quantity", "measured", "target"]
    assert [row[0] for row in rows] == ["Tmax", "width", "speed"]
    header, balance_rows = tables.read_table(tmp_path / tables.HEAT_BALANCE_FILE)
    assert header == ["T", "f", "U"]
    balance = np.array(balance_rows, dtype=float)
    assert balance.shape == (201, 3)
    assert balance[0].tolist() == [300.0, 0.0, 0.0]
    assert balance[-1, 0] == pytest.approx(1500.0)
    assert balance[150, 0] == pytest.approx(1200.0)
    assert np.argmax(balance[100:, 2]) + 100 == 150
    _, trajectory_rows = tables.read_table(tmp_path / "trajectory.csv")
    assert len(trajectory_rows) == 11 * 201
    _, sensor_rows = tables.read_table(tmp_path / "sensor.csv")
    sensor = np.array(sensor_rows, dtype=float)
    assert sensor[0, 0] == 0.0
    assert sensor[-1, 0] == 100.0
    assert sensor[0, 1] == pytest.approx(300.0 + 1200.0 * np.exp(-(50.0**2) / 200.0))


def test_calibration_with_target_rescales() -> None:
    """Test that a measured wave and a target give rescaled coefficients."""
    config = load_config(CONFIG_DIR / "grass_1d.json")
    target = WaveConfig(Tmax=900.0, width=10.0, speed=0.17)
    assert config.calibration is not None
    config = config.replace(calibration=config.calibration.model_copy(update={"target": target}))
    report, _ = calibrate(config)
    assert report.status == STATUS_OK
    assert report.measured is not None
    assert report.rescaled is not None
    assert kinetics.nondim_params(report.rescaled).lam == pytest.approx(report.nondim.lam)
    fitted = report.extras["fitted_scales"]
    wave = kinetics.dimensionalize_wave(report.extras["dimensionless_wave"], fitted)
    assert wave.speed == pytest.approx(0.17)


def test_wave_status_names_the_boundary() -> None:
    """Test that a wave that ran off the domain gets its own status."""
    grid = Grid.line(nx=201, dx=1.0)
    states = []
    for t in range(0, 201, 20):
        T = 300.0 + 500.0 * np.exp(-(((grid.x - 100.0 - 0.5 * t) / 20.0) ** 2))
        states.append(FireState(T=T, S=np.ones(grid.shape), grid=grid, time=float(t)))
    measured, status, reason = measure_or_none(Trajectory(tuple(states)), 300.0, 0.5, 50.0)
    assert measured is None
    assert status == STATUS_LEFT_DOMAIN
    assert "end of the domain" in reason
    still = Trajectory(tuple(FireState.uniform(grid, T=300.0, time=float(t)) for t in range(3)))
    assert measure_or_none(still, 300.0, 0.5, 50.0)[1] == STATUS_NO_WAVE


def test_calibration_needs_1d_grid() -> None:
    """Test that the calibration refuses a 2D configuration."""
    with pytest.raises(ConfigError) as exc:
        calibrate(parse_config(small_twin_data()))
    assert exc.value.key == "grid.dims"


def test_dimensionless_system_is_equivalent(grass_coefficients: ModelCoefficients) -> None:
    """Test that the scaled dimensionless run reproduces the physical run."""
    nd = kinetics.nondim_params(grass_coefficients)
    scales = kinetics.natural_scales(grass_coefficients)
    physical = kinetics.rescale_coefficients(nd, scales, T_a=300.0)
    dimensionless = kinetics.dimensionless_coefficients(nd)

    dx, dt, steps = 2.0, 0.5, 200
    grid = Grid.line(nx=101, dx=dx)
    scaled_grid = Grid.line(nx=101, dx=dx / scales.x1)
    rise = 1200.0 * np.exp(-((grid.x - 100.0) ** 2) / 200.0)
    state = FireState(T=300.0 + rise, S=np.ones(grid.shape), grid=grid)
    scaled = FireState(T=rise / scales.T1, S=np.ones(grid.shape), grid=scaled_grid)

    final = solver.run(state, physical, steps * dt, dt).final
    scaled_final = solver.run(scaled, dimensionless, steps * dt / scales.t1, dt / scales.t1).final
    np.testing.assert_allclose(final.T - 300.0, scales.T1 * scaled_final.T, rtol=1e-8, atol=1e-6)
    np.testing.assert_allclose(final.S, scaled_final.S, rtol=1e-8, atol=1e-12)
