"""Experiment configuration.

Experiments are described by JSON files that map onto the nested frozen
pydantic models below. Unknown keys are rejected and every validation error
names the dotted path of the offending key.
"""

import json
from pathlib import Path
from typing import Any

import pydantic
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    StrictBool,
    StrictInt,
    ValidationInfo,
    field_validator,
    model_validator,
)

from fireda.models.coefficients import DiffusionMode, ModelCoefficients
from fireda.models.ensemble import SmoothFieldParams
from fireda.models.grid import Grid
from fireda.models.wave import WaveMetrics
from fireda.utils.errors import ConfigError

# pydantic error types that mean "well typed but out of range"
_CONSTRAINT_ERRORS = frozenset(
    {
        "greater_than",
        "greater_than_equal",
        "less_than",
        "less_than_equal",
        "too_long",
        "too_short",
        "value_error",
    }
)


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GridConfig(_Section):
    """Mesh definition; ny is ignored for 1D grids."""

    dims: StrictInt
    nx: StrictInt = Field(ge=3)
    dx: float = Field(gt=0)
    ny: StrictInt = Field(default=1, validate_default=True)

    @field_validator("dims")
    @classmethod
    def _known_dims(cls, value: int) -> int:
        if value not in (1, 2):
            raise ValueError("must be 1 or 2")
        return value

    @field_validator("ny")
    @classmethod
    def _plane_height(cls, value: int, info: ValidationInfo) -> int:
        if info.data.get("dims") == 2 and value < 3:
            raise ValueError("must be at least 3 for 2D grids")
        return value

    def to_grid(self) -> Grid:
        """Build the grid."""
        if self.dims == 1:
            return Grid.line(self.nx, self.dx)
        return Grid.plane(self.nx, self.ny, self.dx)


class TimeConfig(_Section):
    """Time stepping.

    Attributes:
        dt: Euler time step (s)
        t_end: Simulated time of single runs (s)
        snapshot_every: Steps between stored snapshots (None keeps first and last)
    """

    dt: float = Field(gt=0)
    t_end: float = Field(default=0.0, ge=0)
    snapshot_every: StrictInt | None = Field(default=None, ge=1)


class ModelConfig(_Section):
    """Model coefficients; see ModelCoefficients for units."""

    k: float = Field(gt=0)
    A: float = Field(gt=0)
    B: float = Field(gt=0)
    C: float = Field(ge=0)
    C_S: float = Field(gt=0)
    T_a: float = Field(default=300.0, gt=0)
    T_0: float | None = None
    wind: tuple[float, ...] = Field(default=(), max_length=2)
    diffusion: DiffusionMode = DiffusionMode.LINEAR

    @field_validator("T_0")
    @classmethod
    def _cutoff_below_ambient(cls, value: float | None, info: ValidationInfo) -> float | None:
        T_a = info.data.get("T_a")
        if value is not None and T_a is not None and value > T_a:
            raise ValueError("must not exceed T_a")
        return value

    def to_coefficients(self) -> ModelCoefficients:
        """Build the coefficient set."""
        return ModelCoefficients(
            k=self.k,
            A=self.A,
            B=self.B,
            C=self.C,
            C_S=self.C_S,
            T_a=self.T_a,
            T_0=self.T_0,
            wind=self.wind,
            diffusion=self.diffusion,
        )


class WaveConfig(_Section):
    """Target traveling wave."""

    Tmax: float = Field(gt=0)
    width: float = Field(gt=0)
    speed: float = Field(gt=0)

    def to_metrics(self) -> WaveMetrics:
        """Build wave metrics."""
        return WaveMetrics(Tmax=self.Tmax, width=self.width, speed=self.speed)


class CalibrationConfig(_Section):
    """Observable fire behaviour the coefficients are identified from.

    Attributes:
        Ti: Auto-ignition temperature (K)
        Tc: Combustion temperature (K)
        t_c: Characteristic cooling time (s)
        target: Wave to rescale the coefficients to, if any
        sensor_x: Sensor position for the time-temperature profile (m)
        reference_level: Fraction of the peak rise defining the wave width
        min_rise: Smallest peak rise counted as a wave (K)
    """

    Ti: float = Field(gt=0)
    Tc: float
    t_c: float = Field(gt=0)
    target: WaveConfig | None = None
    sensor_x: float | None = None
    reference_level: float = Field(default=0.5, gt=0, lt=1)
    min_rise: float = Field(default=50.0, gt=0)

    @field_validator("Tc")
    @classmethod
    def _above_ignition(cls, value: float, info: ValidationInfo) -> float:
        Ti = info.data.get("Ti")
        if Ti is not None and value <= Ti:
            raise ValueError("must exceed Ti")
        return value


class IgnitionConfig(_Section):
    """Initial hot spot.

    Attributes:
        kind: "gaussian" (1D), "square" or "disc" (2D)
        temperature: Peak rise of the Gaussian, or the ignition temperature (K)
        center: Position (x[, y]) in meters; None uses the domain default
        sigma: Gaussian width (m)
        side: Square side (m)
        radius: Disc radius (m)
    """

    kind: str = "square"
    temperature: float = Field(default=1200.0, gt=0)
    center: tuple[float, ...] | None = None
    sigma: float = Field(default=14.142135623730951, gt=0)
    side: float = Field(default=50.0, ge=0)
    radius: float = Field(default=25.0, gt=0)

    @field_validator("kind")
    @classmethod
    def _known_kind(cls, value: str) -> str:
        if value not in ("gaussian", "square", "disc"):
            raise ValueError("unknown ignition kind")
        return value


class FuelConfig(_Section):
    """Initial fuel: a strip break through the centre plus uniform noise."""

    break_width: float = Field(default=0.0, ge=0)
    noise: float = Field(default=0.0, ge=0, lt=1)


class EnsembleConfig(_Section):
    """Ensemble size and perturbation magnitudes."""

    size: StrictInt = Field(default=40, ge=2)
    alpha: float = Field(default=2.0, gt=0.5)
    modes: StrictInt = Field(default=32, ge=1)
    c_T: float = Field(default=5.0, ge=0)
    c_x: float = Field(default=150.0, ge=0)
    c_y: float = Field(default=150.0, ge=0)

    def to_params(self) -> SmoothFieldParams:
        """Build smooth field parameters."""
        return SmoothFieldParams(
            alpha=self.alpha, modes=self.modes, c_T=self.c_T, c_x=self.c_x, c_y=self.c_y
        )


class AssimilationConfig(_Section):
    """Twin experiment cycling.

    Attributes:
        cycle_length: Forecast time between analyses (s)
        cycles: Number of analysis cycles
        stride: Observation spacing in nodes
        variance: Observation error variance
        rho: Regularization variance (0 disables the pass)
        reperturb: Post-analysis perturbation as a fraction of the initial one
        offset: Reference ignition displacement along x (m)
        perturb_data: Randomize the data per member
        front_level: Temperature of the front contour (K); None uses T_a + 400
    """

    cycle_length: float = Field(default=100.0, gt=0)
    cycles: StrictInt = Field(default=10, ge=1)
    stride: StrictInt = Field(default=5, ge=1)
    variance: float = Field(default=10.0, gt=0)
    rho: float = Field(default=750.0, ge=0)
    reperturb: float = Field(default=0.05, ge=0)
    offset: float = 100.0
    perturb_data: StrictBool = True
    front_level: float | None = None


class OutputConfig(_Section):
    """Where and what to write.

    Attributes:
        directory: Output directory
        snapshots: Write binary snapshots every this many cycles (or stored
            steps of a free run); 0 writes none
        workers: Worker threads for ensemble members
    """

    directory: str = Field(default="out", min_length=1)
    snapshots: StrictInt = Field(default=0, ge=0)
    workers: StrictInt = 1

    @field_validator("workers")
    @classmethod
    def _worker_count(cls, value: int) -> int:
        if value < 1 and value != -1:
            raise ValueError("must be >= 1 or -1")
        return value


class ExperimentConfig(_Section):
    """A complete experiment description."""

    grid: GridConfig
    time: TimeConfig
    model: ModelConfig
    name: str = "experiment"
    seed: StrictInt = Field(default=0, ge=0)
    calibration: CalibrationConfig | None = None
    ignition: IgnitionConfig = Field(default_factory=IgnitionConfig)
    fuel: FuelConfig = Field(default_factory=FuelConfig)
    ensemble: EnsembleConfig = Field(default_factory=EnsembleConfig)
    assimilation: AssimilationConfig = Field(default_factory=AssimilationConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @model_validator(mode="after")
    def _sections_agree(self) -> "ExperimentConfig":
        # ConfigError is not a ValueError, so pydantic passes it through with its key
        dims = self.grid.dims
        if self.ignition.kind == "gaussian" and dims != 1:
            raise ConfigError("gaussian ignition needs a 1D grid", "CONFIG_003", "ignition.kind")
        if self.ignition.kind != "gaussian" and dims != 2:
            raise ConfigError(
                f"{self.ignition.kind} needs a 2D grid", "CONFIG_003", "ignition.kind"
            )
        if self.ignition.center is not None and len(self.ignition.center) != dims:
            raise ConfigError(f"must have {dims} coordinate(s)", "CONFIG_003", "ignition.center")
        if len(self.model.wind) not in (0, dims):
            raise ConfigError(f"must have {dims} component(s)", "CONFIG_003", "model.wind")
        return self

    def replace(self, **changes: Any) -> "ExperimentConfig":
        """Create a new, revalidated config with some sections replaced."""
        data = self.model_dump()
        for key, value in changes.items():
            data[key] = value.model_dump() if isinstance(value, BaseModel) else value
        return parse_config(data)

    def with_overrides(
        self,
        seed: int | None = None,
        directory: str | None = None,
        snapshots: int | None = None,
        workers: int | None = None,
    ) -> "ExperimentConfig":
        """Apply command line overrides.

        Raises:
            ConfigError: If an override is invalid
        """
        output = self.output.model_dump()
        overrides = {"directory": directory, "snapshots": snapshots, "workers": workers}
        output.update({key: value for key, value in overrides.items() if value is not None})
        return self.replace(seed=self.seed if seed is None else seed, output=output)


def _dotted(location: tuple[int | str, ...]) -> str | None:
    key = ""
    for part in location:
        if isinstance(part, int):
            key += f"[{part}]"
        else:
            key = f"{key}.{part}" if key else part
    return key or None


def _config_error(error: pydantic.ValidationError) -> ConfigError:
    """Translate the first pydantic error into a ConfigError naming its key."""
    details = error.errors()[0]
    kind = details["type"]
    key = _dotted(tuple(details["loc"]))
    if kind == "missing":
        return ConfigError("missing required key", code="CONFIG_005", key=key)
    if kind == "extra_forbidden":
        return ConfigError("unknown key", code="CONFIG_004", key=key)
    message = str(details["msg"]).removeprefix("Value error, ")
    code = "CONFIG_003" if kind in _CONSTRAINT_ERRORS else "CONFIG_002"
    return ConfigError(message, code=code, key=key)


def parse_config(data: Any) -> ExperimentConfig:
    """Build an experiment config from decoded JSON.

    Raises:
        ConfigError: If a key is unknown, missing, mistyped or invalid
    """
    if not isinstance(data, dict):
        raise ConfigError("Top level of the configuration must be an object", code="CONFIG_002")
    try:
        return ExperimentConfig.model_validate(data)
    except pydantic.ValidationError as e:
        raise _config_error(e) from None


def load_config(path: str | Path) -> ExperimentConfig:
    """Read and validate an experiment configuration file.

    Args:
        path: JSON file

    Returns:
        Validated configuration with defaults filled in

    Raises:
        ConfigError: If the file cannot be read, parsed or validated
    """
    source = Path(path)
    try:
        text = source.read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read {source}: {e.strerror}", code="CONFIG_001") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(
            f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}",
            code="CONFIG_001",
        ) from e
    return parse_config(data)
