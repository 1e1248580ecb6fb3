"""Ensemble models."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from fireda.models.grid import Grid
from fireda.models.state import FireState
from fireda.utils.errors import ValidationError


@dataclass(frozen=True)
class SmoothFieldParams:
    """Smooth random field and perturbation magnitudes.

    Attributes:
        alpha: Smoothness order of the random field
        modes: Number of sine modes kept per axis
        c_T: Additive temperature perturbation magnitude (K)
        c_x: Spatial shift magnitude along x (m)
        c_y: Spatial shift magnitude along y (m)
    """

    alpha: float = 2.0
    modes: int = 32
    c_T: float = 5.0
    c_x: float = 150.0
    c_y: float = 150.0

    def __post_init__(self) -> None:
        """Validate parameters.

        Raises:
            ValidationError: If a parameter is out of range
        """
        if not self.alpha > 0.5:
            raise ValidationError(f"alpha must exceed 0.5, got {self.alpha}", code="ENS_001")
        if self.modes < 1:
            raise ValidationError(f"modes must be at least 1, got {self.modes}", code="ENS_001")
        for name in ("c_T", "c_x", "c_y"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative", code="ENS_001")

    def scaled(self, fraction: float) -> "SmoothFieldParams":
        """Same field shape with every magnitude multiplied by fraction."""
        return SmoothFieldParams(
            alpha=self.alpha,
            modes=self.modes,
            c_T=self.c_T * fraction,
            c_x=self.c_x * fraction,
            c_y=self.c_y * fraction,
        )


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Ordered collection of fire states sharing one grid.

    Attributes:
        members: Member states
    """

    members: tuple[FireState, ...]

    def __post_init__(self) -> None:
        """Validate ensemble.

        Raises:
            ValidationError: If fewer than two members or mixed grids
        """
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) < 2:
            raise ValidationError("Ensemble needs at least 2 members", code="ENS_002")
        grid = self.members[0].grid
        if any(member.grid != grid for member in self.members):
            raise ValidationError("Ensemble members must share one grid", code="ENS_003")

    @property
    def size(self) -> int:
        """Number of members N."""
        return len(self.members)

    @property
    def grid(self) -> Grid:
        """Shared grid."""
        return self.members[0].grid

    @property
    def time(self) -> float:
        """Clock of the first member."""
        return self.members[0].time

    def as_matrix(self) -> npt.NDArray[np.float64]:
        """n x N matrix whose columns are the flattened members."""
        from fireda.services.fields import flatten

        return np.column_stack([flatten(member) for member in self.members])

    @classmethod
    def from_matrix(
        cls, matrix: npt.NDArray[np.float64], grid: Grid, time: float, clip_fuel: bool = True
    ) -> "Ensemble":
        """Rebuild an ensemble from an n x N state matrix.

        Args:
            matrix: Columns are flattened member states
            grid: Mesh of the members
            time: Clock assigned to every member
            clip_fuel: Clamp fuel fractions into [0, 1]

        Returns:
            New ensemble
        """
        from fireda.services.fields import unflatten

        members = []
        for column in np.asarray(matrix).T:
            state = unflatten(column, grid, time=time)
            if clip_fuel:
                state = state.replace(S=np.clip(state.S, 0.0, 1.0))
            members.append(state)
        return cls(tuple(members))

    def mean_T(self) -> npt.NDArray[np.float64]:
        """Ensemble mean temperature field."""
        return np.mean([member.T for member in self.members], axis=0)

    def mean_state(self) -> FireState:
        """Ensemble mean as a state."""
        return FireState(
            T=self.mean_T(),
            S=np.mean([member.S for member in self.members], axis=0),
            grid=self.grid,
            time=self.time,
        )

    def mean_T_variance(self) -> float:
        """Pointwise sample variance of T averaged over the grid."""
        stack = np.stack([member.T for member in self.members])
        return float(np.var(stack, axis=0, ddof=1).mean())
