"""Experiment report models."""

from dataclasses import asdict, dataclass, field
from typing import Any

from fireda.models.coefficients import EquilibriumSet, ModelCoefficients, NondimParams
from fireda.models.wave import WaveMetrics


@dataclass(frozen=True)
class CycleReport:
    """Diagnostics of one assimilation cycle.

    Attributes:
        cycle: Cycle index starting at 1
        time: Simulation time after the forecast (s)
        rmse_pre: RMSE of ensemble mean T vs reference before the analysis (K)
        rmse_post: RMSE of ensemble mean T vs reference after the analysis (K)
        front_distance: Front distance between ensemble mean and reference (m)
        control_front_distance: Front distance between the comparison run and reference (m)
        variance_mean: Grid-averaged ensemble T variance after the analysis (K^2)
        wall_time: Seconds spent on the cycle (kept out of the metrics table)
    """

    cycle: int
    time: float
    rmse_pre: float
    rmse_post: float
    front_distance: float
    control_front_distance: float
    variance_mean: float
    wall_time: float = 0.0

    METRIC_COLUMNS = (
        "cycle",
        "time",
        "rmse_pre",
        "rmse_post",
        "front_distance",
        "control_front_distance",
        "variance_mean",
    )

    def metric_row(self) -> list[str]:
        """Deterministic CSV row (no wall time)."""
        return [repr(getattr(self, name)) for name in self.METRIC_COLUMNS]


@dataclass(frozen=True)
class CalibrationReport:
    """Outcome of the one-dimensional calibration workflow.

    Attributes:
        status: "ok" or "no sustained wave"
        identified_B: B from the equilibrium temperatures (K)
        identified_C: C from the equilibrium temperatures (1/K)
        identified_A: A from the cooling time (K/s)
        coefficients: Coefficient set the wave was simulated with
        nondim: Dimensionless coefficients of that set
        equilibria: Equilibria of the identified (B, C)
        measured: Measured wave, if one developed
        target: Target wave, if configured
        rescaled: Coefficients reproducing the target wave, if a target is set
        displacement: Leading edge displacement over the run (m)
        detail: Free-form diagnostic message
    """

    status: str
    identified_B: float
    identified_C: float
    identified_A: float
    coefficients: ModelCoefficients
    nondim: NondimParams
    equilibria: EquilibriumSet
    measured: WaveMetrics | None = None
    target: WaveMetrics | None = None
    rescaled: ModelCoefficients | None = None
    displacement: float | None = None
    detail: str = ""
    extras: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready representation."""
        return asdict(self)
