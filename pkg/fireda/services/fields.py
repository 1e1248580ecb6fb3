"""Flattening between gridded fire states and analysis state vectors.

The state vector holds every T value in row-major order followed by every S
value, so observation index arithmetic stays trivial.
"""

import numpy as np
import numpy.typing as npt

from fireda.models.grid import Grid
from fireda.models.state import FireState
from fireda.utils.errors import ValidationError

StateVector = npt.NDArray[np.float64]


def flatten(state: FireState) -> StateVector:
    """Flatten a state into its T-block-then-S-block vector.

    Args:
        state: State to flatten

    Returns:
        Vector of length 2 * grid.cells
    """
    return np.concatenate((state.T.ravel(order="C"), state.S.ravel(order="C")))


def unflatten(vector: npt.ArrayLike, grid: Grid, time: float = 0.0) -> FireState:
    """Rebuild a state from its flattened vector.

    Args:
        vector: Values laid out as by flatten()
        grid: Mesh of the state
        time: Clock of the rebuilt state

    Returns:
        Rebuilt state

    Raises:
        ValidationError: If the vector length does not match the grid
    """
    values = np.asarray(vector, dtype=np.float64)
    if values.ndim != 1 or values.size != grid.state_size:
        raise ValidationError(
            f"State vector has {values.size} entries, grid needs {grid.state_size}",
            code="FIELD_005",
        )
    cells = grid.cells
    return FireState(
        T=values[:cells].reshape(grid.shape),
        S=values[cells:].reshape(grid.shape),
        grid=grid,
        time=time,
    )
