"""Grid geometry model."""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from fireda.utils.errors import ValidationError


@dataclass(frozen=True)
class Grid:
    """Immutable node-based rectangular mesh.

    Node i sits at x = i*dx, so the domain spans (nx - 1)*dx. Fields on a 1D
    grid have shape (nx,); on a 2D grid (ny, nx) with axis 0 running along y.

    Attributes:
        dims: Number of spatial dimensions (1 or 2)
        nx: Node count along x
        ny: Node count along y (1 for 1D grids)
        dx: Mesh step in meters
    """

    dims: int
    nx: int
    ny: int
    dx: float

    def __post_init__(self) -> None:
        """Validate grid data.

        Raises:
            ValidationError: If grid data is invalid
        """
        if self.dims not in (1, 2):
            raise ValidationError(f"Grid dims must be 1 or 2, got {self.dims}", code="FIELD_001")
        if self.nx < 3:
            raise ValidationError(f"Grid nx must be at least 3, got {self.nx}", code="FIELD_002")
        if self.dims == 2 and self.ny < 3:
            raise ValidationError(f"Grid ny must be at least 3, got {self.ny}", code="FIELD_002")
        if self.dims == 1 and self.ny != 1:
            raise ValidationError("1D grids must have ny = 1", code="FIELD_002")
        if not self.dx > 0:
            raise ValidationError(f"Grid dx must be positive, got {self.dx}", code="FIELD_003")

    @classmethod
    def line(cls, nx: int, dx: float) -> "Grid":
        """Create a 1D grid."""
        return cls(dims=1, nx=nx, ny=1, dx=dx)

    @classmethod
    def plane(cls, nx: int, ny: int, dx: float) -> "Grid":
        """Create a 2D grid."""
        return cls(dims=2, nx=nx, ny=ny, dx=dx)

    @property
    def shape(self) -> tuple[int, ...]:
        """Array shape of a field on this grid."""
        return (self.nx,) if self.dims == 1 else (self.ny, self.nx)

    @property
    def cells(self) -> int:
        """Number of nodes."""
        return self.nx * self.ny

    @property
    def state_size(self) -> int:
        """Length of the flattened (T, S) state vector."""
        return 2 * self.cells

    @property
    def length_x(self) -> float:
        """Domain extent along x in meters."""
        return (self.nx - 1) * self.dx

    @property
    def length_y(self) -> float:
        """Domain extent along y in meters (0 for 1D grids)."""
        return (self.ny - 1) * self.dx

    @property
    def x(self) -> npt.NDArray[np.float64]:
        """Node coordinates along x."""
        return np.arange(self.nx, dtype=np.float64) * self.dx

    @property
    def y(self) -> npt.NDArray[np.float64]:
        """Node coordinates along y."""
        return np.arange(self.ny, dtype=np.float64) * self.dx

    def mesh(self) -> tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
        """Coordinate arrays (X, Y) shaped like a 2D field."""
        if self.dims != 2:
            raise ValidationError("mesh() requires a 2D grid", code="FIELD_001")
        xx, yy = np.meshgrid(self.x, self.y)
        return xx, yy
