"""Precondition checks shared by the experiment workflows."""

import logging

from fireda.config import CalibrationConfig, ExperimentConfig
from fireda.models.state import FireState
from fireda.utils.errors import ConfigError

logger = logging.getLogger(__name__)

FUEL_TOLERANCE = 1e-9


def require_dims(config: ExperimentConfig, dims: int, workflow: str) -> None:
    """Ensure the configured grid has the dimension a workflow needs.

    Raises:
        ConfigError: If the dimension differs
    """
    if config.grid.dims != dims:
        raise ConfigError(
            f"{workflow} needs a {dims}D grid, got {config.grid.dims}D",
            code="CONFIG_006",
            key="grid.dims",
        )


def require_calibration(config: ExperimentConfig) -> CalibrationConfig:
    """Return the calibration section.

    Raises:
        ConfigError: If it is missing
    """
    if config.calibration is None:
        raise ConfigError("missing required section", code="CONFIG_005", key="calibration")
    return config.calibration


def require_run_length(config: ExperimentConfig) -> None:
    """Ensure a single-run workflow has something to integrate.

    Raises:
        ConfigError: If t_end is zero
    """
    if not config.time.t_end > 0:
        raise ConfigError("must be positive for this workflow", code="CONFIG_003", key="time.t_end")


def check_fuel_nonincreasing(before: FireState, after: FireState, label: str) -> bool:
    """Log a warning when total fuel grew between two states of a pure run."""
    grew = after.total_fuel() > before.total_fuel() + FUEL_TOLERANCE * before.grid.cells
    if grew:
        logger.warning(
            "Total fuel of the %s run grew from %.6g to %.6g",
            label,
            before.total_fuel(),
            after.total_fuel(),
        )
    return not grew
