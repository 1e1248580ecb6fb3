"""Fire state model."""

from dataclasses import dataclass
from dataclasses import replace as dataclass_replace

import numpy as np
import numpy.typing as npt

from fireda.models.grid import Grid
from fireda.utils.errors import ValidationError

Field = npt.NDArray[np.float64]


def _frozen_field(values: npt.ArrayLike) -> Field:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class FireState:
    """Immutable snapshot of temperature and fuel fraction on a grid.

    Arrays are copied on construction and marked read-only, so a state can be
    shared between worker threads.

    Attributes:
        T: Temperature field (K)
        S: Fuel mass fraction field (dimensionless)
        grid: Mesh the fields live on
        time: Simulation clock (s)
    """

    T: Field
    S: Field
    grid: Grid
    time: float = 0.0

    def __post_init__(self) -> None:
        """Validate field shapes.

        Raises:
            ValidationError: If a field does not conform to the grid
        """
        object.__setattr__(self, "T", _frozen_field(self.T))
        object.__setattr__(self, "S", _frozen_field(self.S))
        for name, field in (("T", self.T), ("S", self.S)):
            if field.shape != self.grid.shape:
                raise ValidationError(
                    f"Field {name} has shape {field.shape}, grid expects {self.grid.shape}",
                    code="FIELD_004",
                )

    @classmethod
    def uniform(cls, grid: Grid, T: float, S: float = 1.0, time: float = 0.0) -> "FireState":
        """Create a state with constant temperature and fuel."""
        return cls(T=np.full(grid.shape, T), S=np.full(grid.shape, S), grid=grid, time=time)

    def replace(self, **kwargs: object) -> "FireState":
        """Create a new FireState with updated fields.

        Args:
            **kwargs: Fields to update

        Returns:
            New FireState instance with updated fields
        """
        return dataclass_replace(self, **kwargs)  # type: ignore[arg-type]

    def same_as(self, other: "FireState") -> bool:
        """Bit-exact comparison of fields, grid and clock."""
        return (
            self.grid == other.grid
            and self.time == other.time
            and np.array_equal(self.T, other.T)
            and np.array_equal(self.S, other.S)
        )

    def total_fuel(self) -> float:
        """Sum of the fuel fraction over all nodes."""
        return float(self.S.sum())
