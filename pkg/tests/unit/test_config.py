"""Unit tests for experiment configuration loading."""

from pathlib import Path

import pydantic
import pytest

from fireda.config import ExperimentConfig, load_config, parse_config
from fireda.models import DiffusionMode
from fireda.utils.errors import ConfigError
from tests.fixtures import CONFIG_DIR, small_calibration_data, small_twin_data, write_config


@pytest.mark.parametrize("name", ["grass_1d", "grass_1d_cold", "paper_2d", "half_2d", "free_2d"])
def test_shipped_configs_load(name: str) -> None:
    """Test that every shipped experiment file is valid."""
    config = load_config(CONFIG_DIR / f"{name}.json")
    assert config.name == name
    assert config.time.dt > 0


def test_twin_configs_share_the_layout() -> None:
    """Test that the half-scale twin halves every length of the full-scale one."""
    full = load_config(CONFIG_DIR / "paper_2d.json")
    half = load_config(CONFIG_DIR / "half_2d.json")
    assert full.grid.nx == 250
    assert full.assimilation.offset == 100.0
    assert half.grid.nx * 2 == full.grid.nx
    assert half.ignition.side * 2 == full.ignition.side
    assert half.fuel.break_width * 2 == full.fuel.break_width
    assert half.ensemble.c_x * 2 == full.ensemble.c_x
    assert half.assimilation.offset * 2 == full.assimilation.offset
    assert half.assimilation.cycle_length * 2 == full.assimilation.cycle_length
    assert half.seed == full.seed


def test_grass_configs() -> None:
    """Test the values of the 1D calibration files."""
    config = load_config(CONFIG_DIR / "grass_1d.json")
    assert config.grid.nx == 501
    assert config.model.diffusion is DiffusionMode.LINEAR
    assert config.calibration is not None
    assert config.calibration.Ti == 670.0
    assert config.model.to_coefficients().cutoff == 300.0
    cold = load_config(CONFIG_DIR / "grass_1d_cold.json")
    assert cold.model.T_0 == 0.0


def test_defaults_are_filled_in(tmp_path: Path) -> None:
    """Test that omitted sections take their defaults."""
    config = load_config(write_config(small_calibration_data(), tmp_path))
    assert config.seed == 0
    assert config.ensemble.size == 40
    assert config.output.directory == "out"
    assert config.calibration is not None
    assert config.calibration.target is None


def test_empty_file_is_rejected(tmp_path: Path) -> None:
    """Test that an empty file reports invalid JSON."""
    path = tmp_path / "empty.json"
    path.write_text("")
    with pytest.raises(ConfigError) as exc:
        load_config(path)
    assert exc.value.code == "CONFIG_001"
    assert "line 1" in str(exc.value)


def test_missing_file_is_rejected(tmp_path: Path) -> None:
    """Test that an unreadable file is a configuration error."""
    with pytest.raises(ConfigError) as exc:
        load_config(tmp_path / "absent.json")
    assert exc.value.code == "CONFIG_001"


def test_invalid_value_names_its_key() -> None:
    """Test that a bad time step is reported as time.dt."""
    data = small_calibration_data()
    data["time"]["dt"] = 0.0
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.code == "CONFIG_003"
    assert exc.value.key == "time.dt"
    assert str(exc.value).startswith("time.dt: ")


def test_unknown_key_is_rejected() -> None:
    """Test that typos are not silently ignored."""
    data = small_calibration_data()
    data["grid"]["foo"] = 1
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.code == "CONFIG_004"
    assert exc.value.key == "grid.foo"


def test_missing_section_is_rejected() -> None:
    """Test that the model section is required."""
    data = small_calibration_data()
    del data["model"]
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.code == "CONFIG_005"
    assert exc.value.key == "model"


def test_wrong_type_is_rejected() -> None:
    """Test that a string where an integer belongs is a type error."""
    data = small_calibration_data()
    data["grid"]["nx"] = "201"
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.code == "CONFIG_002"
    assert exc.value.key == "grid.nx"
    data = small_calibration_data()
    data["grid"]["nx"] = 201.0
    with pytest.raises(ConfigError):
        parse_config(data)


def test_unknown_diffusion_mode_is_rejected() -> None:
    """Test that the diffusion form must be linear or cubic."""
    data = small_calibration_data()
    data["model"]["diffusion"] = "quadratic"
    with pytest.raises(ConfigError, match="cubic") as exc:
        parse_config(data)
    assert exc.value.key == "model.diffusion"


def test_top_level_must_be_object() -> None:
    """Test that a JSON list is not a configuration."""
    with pytest.raises(ConfigError):
        parse_config([1, 2])


def test_ignition_kind_must_fit_grid() -> None:
    """Test that Gaussian ignition is refused on a 2D grid."""
    data = small_twin_data()
    data["ignition"] = {"kind": "gaussian"}
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.key == "ignition.kind"


def test_wind_must_fit_grid() -> None:
    """Test that a 1D wind is refused on a 2D grid."""
    data = small_twin_data()
    data["model"]["wind"] = [1.0]
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.key == "model.wind"


def test_nested_optional_section() -> None:
    """Test that the calibration target is parsed into wave metrics."""
    data = small_calibration_data()
    data["calibration"]["target"] = {"Tmax": 900.0, "width": 10.0, "speed": 0.17}
    config = parse_config(data)
    assert config.calibration is not None
    assert config.calibration.target is not None
    assert config.calibration.target.to_metrics().speed == 0.17


def test_command_line_overrides() -> None:
    """Test that overrides replace only the given settings."""
    config = parse_config(small_twin_data())
    changed = config.with_overrides(seed=3, directory="elsewhere", workers=2)
    assert isinstance(changed, ExperimentConfig)
    assert changed.seed == 3
    assert changed.output.directory == "elsewhere"
    assert changed.output.workers == 2
    assert changed.output.snapshots == 0
    assert config.with_overrides(snapshots=5).output.snapshots == 5
    assert config.with_overrides().seed == 11
    with pytest.raises(ConfigError) as exc:
        config.with_overrides(workers=0)
    assert exc.value.key == "output.workers"


def test_snapshot_cadence_must_not_be_negative() -> None:
    """Test that the snapshot cadence is a non-negative integer."""
    data = small_twin_data()
    data["output"] = {"snapshots": -1}
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.code == "CONFIG_003"
    assert exc.value.key == "output.snapshots"
    data["output"] = {"snapshots": True}
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.code == "CONFIG_002"


def test_list_entries_are_named_by_index() -> None:
    """Test that an error inside a list names the offending position."""
    data = small_twin_data()
    data["model"]["wind"] = [1.0, "north"]
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.key == "model.wind[1]"


def test_plane_grid_needs_height() -> None:
    """Test that a 2D grid without ny is refused."""
    data = small_twin_data()
    del data["grid"]["ny"]
    with pytest.raises(ConfigError) as exc:
        parse_config(data)
    assert exc.value.key == "grid.ny"


def test_configs_are_frozen() -> None:
    """Test that a parsed configuration cannot be changed in place."""
    config = parse_config(small_twin_data())
    with pytest.raises(pydantic.ValidationError):
        config.seed = 4  # type: ignore[misc]
