"""Observation and analysis configuration models."""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np
import numpy.typing as npt

from fireda.utils.errors import ValidationError


class Variable(IntEnum):
    """State variable tag; the value is the block index in the state vector."""

    T = 0
    S = 1


@dataclass(frozen=True, eq=False)
class ObservationSpec:
    """Sampled state entries, observed values and diagonal error covariance.

    Attributes:
        cells: Flat (row-major) node index of each sample
        variables: Variable tag of each sample (0 = T, 1 = S)
        values: Observed values d
        variances: Diagonal of the error covariance R
        n_cells: Node count of the observed grid
    """

    cells: npt.NDArray[np.int64]
    variables: npt.NDArray[np.int64]
    values: npt.NDArray[np.float64]
    variances: npt.NDArray[np.float64]
    n_cells: int

    def __post_init__(self) -> None:
        """Validate observation arrays.

        Raises:
            ValidationError: If arrays disagree in length, are empty, or variances are not positive
        """
        object.__setattr__(self, "cells", np.asarray(self.cells, dtype=np.int64))
        object.__setattr__(self, "variables", np.asarray(self.variables, dtype=np.int64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "variances", np.asarray(self.variances, dtype=np.float64))
        m = self.cells.size
        if m < 1:
            raise ValidationError("Observation needs at least one sample", code="OBS_001")
        if not (self.variables.size == self.values.size == self.variances.size == m):
            raise ValidationError("Observation arrays must have equal length", code="OBS_002")
        if not np.all(self.variances > 0):
            raise ValidationError("Observation variances must be positive", code="OBS_003")
        if not np.all(np.isin(self.variables, (Variable.T, Variable.S))):
            raise ValidationError(
                "Observation variable tags must be 0 (T) or 1 (S)", code="OBS_002"
            )

    @property
    def size(self) -> int:
        """Number of samples m."""
        return int(self.cells.size)

    @property
    def state_indices(self) -> npt.NDArray[np.int64]:
        """Positions of the samples in the flattened state vector."""
        return self.variables * self.n_cells + self.cells


@dataclass(frozen=True)
class AnalysisConfig:
    """Settings of one analysis step.

    Attributes:
        rho: Variance of the gradient regularization observation (0 disables it)
        perturb_data: Randomize the data per member
        seed: Root seed of the data perturbation streams
        cycle: Assimilation cycle label of the data perturbation streams
    """

    rho: float = 0.0
    perturb_data: bool = True
    seed: int = 0
    cycle: int = 0

    def __post_init__(self) -> None:
        """Validate configuration.

        Raises:
            ValidationError: If rho is negative
        """
        if not self.rho >= 0:
            raise ValidationError(f"rho must be non-negative, got {self.rho}", code="ENKF_001")
