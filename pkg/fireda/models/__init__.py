"""Data models for fireda."""

from fireda.models.coefficients import (
    DiffusionMode,
    EquilibriumSet,
    ModelCoefficients,
    NondimParams,
    Scales,
)
from fireda.models.ensemble import Ensemble, SmoothFieldParams
from fireda.models.grid import Grid
from fireda.models.observation import AnalysisConfig, ObservationSpec, Variable
from fireda.models.report import CalibrationReport, CycleReport
from fireda.models.state import FireState
from fireda.models.wave import Trajectory, WaveMetrics

__all__ = [
    "AnalysisConfig",
    "CalibrationReport",
    "CycleReport",
    "DiffusionMode",
    "Ensemble",
    "EquilibriumSet",
    "FireState",
    "Grid",
    "ModelCoefficients",
    "NondimParams",
    "ObservationSpec",
    "Scales",
    "SmoothFieldParams",
    "Trajectory",
    "Variable",
    "WaveMetrics",
]
