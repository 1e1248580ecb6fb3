"""Smooth random fields and ensemble perturbation.

Members are built from one comparison state by adding a smooth random
temperature field and then warping both fields with smooth random shifts.
Every random draw comes from a labelled substream, so a member's noise does
not depend on how many members or workers there are.
"""

import logging

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed
from scipy import ndimage

from fireda.models.ensemble import Ensemble, SmoothFieldParams
from fireda.models.grid import Grid
from fireda.models.state import FireState
from fireda.utils.errors import ValidationError
from fireda.utils.seeding import SeedStream

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def sine_basis(coordinates: FloatArray, length: float, modes: int) -> FloatArray:
    """Rows sin(n pi x / L) for n = 1..modes, shape (modes, len(x))."""
    n = np.arange(1, modes + 1, dtype=np.float64)[:, None]
    return np.sin(n * np.pi * coordinates[None, :] / length)


def mode_weights(alpha: float, modes: int, dims: int) -> FloatArray:
    """Spectral weights 1/(1 + |n|^(2 alpha)) of the sine modes.

    In 2D the weight of mode (i, j) is 1/(1 + (i^2 + j^2)^alpha), indexed [j, i].
    """
    n = np.arange(1, modes + 1, dtype=np.float64)
    if dims == 1:
        return 1.0 / (1.0 + n ** (2.0 * alpha))
    jj, ii = np.meshgrid(n, n, indexing="ij")
    return 1.0 / (1.0 + (ii**2 + jj**2) ** alpha)


def smooth_field_from_coefficients(
    grid: Grid, alpha: float, coefficients: npt.ArrayLike
) -> FloatArray:
    """Weighted sine series with the given standard coefficients.

    Args:
        grid: Mesh of the field
        alpha: Smoothness order
        coefficients: v_n (1D, length d) or v_ij (2D, shape (d, d) indexed [j, i])

    Returns:
        Field on the grid, zero on the boundary
    """
    v = np.asarray(coefficients, dtype=np.float64)
    modes = v.shape[0]
    weighted = mode_weights(alpha, modes, grid.dims) * v
    basis_x = sine_basis(grid.x, grid.length_x, modes)
    if grid.dims == 1:
        return weighted @ basis_x
    basis_y = sine_basis(grid.y, grid.length_y, modes)
    return basis_y.T @ weighted @ basis_x


def smooth_random_field(
    grid: Grid, alpha: float, modes: int, rng: np.random.Generator
) -> FloatArray:
    """Draw a smooth random field vanishing on the domain boundary.

    Args:
        grid: Mesh of the field
        alpha: Smoothness order; larger values give smoother fields
        modes: Number of sine modes per axis
        rng: Source of the standard normal coefficients

    Returns:
        Random field on the grid

    Raises:
        ValidationError: If there are more modes than interior nodes
    """
    smallest = grid.nx if grid.dims == 1 else min(grid.nx, grid.ny)
    if not 1 <= modes <= smallest - 2:
        raise ValidationError(
            f"modes must be between 1 and {smallest - 2} on this grid, got {modes}",
            code="ENS_004",
        )
    shape = (modes,) if grid.dims == 1 else (modes, modes)
    return smooth_field_from_coefficients(grid, alpha, rng.standard_normal(shape))


def perturb_additive(state: FireState, field: FloatArray, c_T: float) -> FireState:
    """Add c_T times a field to the temperature; fuel is left alone."""
    if np.shape(field) != state.grid.shape:
        raise ValidationError("Perturbation field does not conform to the grid", code="ENS_005")
    return state.replace(T=state.T + c_T * np.asarray(field))


def perturb_shift(
    state: FireState,
    shift_field_x: FloatArray,
    shift_field_y: FloatArray | None,
    c_x: float,
    c_y: float,
    T_a: float,
) -> FireState:
    """Warp both fields by a smooth displacement.

    The new value at (x, y) is the old one at (x + c_x u_x, y + c_y u_y),
    interpolated bilinearly. Points outside the domain read T_a for the
    temperature and 1 for the fuel.

    Args:
        state: State to warp
        shift_field_x: Displacement field along x
        shift_field_y: Displacement field along y (ignored on 1D grids)
        c_x: Displacement magnitude along x (m)
        c_y: Displacement magnitude along y (m)
        T_a: Ambient temperature (K)

    Returns:
        Warped state
    """
    grid = state.grid
    columns = np.arange(grid.nx, dtype=np.float64) + c_x * np.asarray(shift_field_x) / grid.dx
    if grid.dims == 1:
        coordinates = columns[None, :]
    else:
        if shift_field_y is None:
            raise ValidationError("2D shifts need a y displacement field", code="ENS_005")
        rows = np.arange(grid.ny, dtype=np.float64)[:, None]
        rows = rows + c_y * np.asarray(shift_field_y) / grid.dx
        coordinates = np.stack([rows, np.broadcast_to(columns, grid.shape)])
    T = ndimage.map_coordinates(state.T, coordinates, order=1, mode="constant", cval=T_a)
    S = ndimage.map_coordinates(state.S, coordinates, order=1, mode="constant", cval=1.0)
    return state.replace(T=T, S=np.clip(S, 0.0, 1.0))


def perturb_member(
    state: FireState, params: SmoothFieldParams, stream: SeedStream, T_a: float
) -> FireState:
    """Additive temperature noise followed by a random shift.

    The T, x and y fields are drawn from the substreams "T", "x" and "y".
    """
    grid = state.grid
    if params.c_T > 0:
        field = smooth_random_field(grid, params.alpha, params.modes, stream.child("T").generator())
        state = perturb_additive(state, field, params.c_T)
    if params.c_x > 0 or (grid.dims == 2 and params.c_y > 0):
        fx = smooth_random_field(grid, params.alpha, params.modes, stream.child("x").generator())
        fy = None
        if grid.dims == 2:
            fy = smooth_random_field(
                grid, params.alpha, params.modes, stream.child("y").generator()
            )
        state = perturb_shift(state, fx, fy, params.c_x, params.c_y, T_a)
    return state


def init_ensemble(
    comparison: FireState,
    N: int,
    params: SmoothFieldParams,
    stream: SeedStream,
    T_a: float,
    n_jobs: int = 1,
) -> Ensemble:
    """Build N independently perturbed copies of the comparison state.

    Args:
        comparison: Unperturbed state the ensemble is centred on
        N: Ensemble size
        params: Field shape and perturbation magnitudes
        stream: Experiment seed stream; member j uses ("init", j)
        T_a: Ambient temperature (K)
        n_jobs: Worker threads

    Returns:
        Initial ensemble

    Raises:
        ValidationError: If N < 2
    """
    if N < 2:
        raise ValidationError(f"Ensemble needs at least 2 members, got {N}", code="ENS_002")
    members = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(perturb_member)(comparison, params, stream.child("init", j), T_a)
        for j in range(N)
    )
    ensemble = Ensemble(tuple(members))
    logger.info(
        "Initialized %d members, mean T variance %.4g K^2", N, ensemble.mean_T_variance()
    )
    return ensemble


def reperturb(
    ensemble: Ensemble,
    params: SmoothFieldParams,
    fraction: float,
    stream: SeedStream,
    T_a: float,
    cycle: int = 0,
    n_jobs: int = 1,
) -> Ensemble:
    """Perturb every member again with magnitudes scaled by fraction.

    Member j draws from ("reperturb", cycle, j).
    """
    if fraction < 0:
        raise ValidationError(f"fraction must be non-negative, got {fraction}", code="ENS_001")
    if fraction == 0:
        return ensemble
    scaled = params.scaled(fraction)
    members = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(perturb_member)(member, scaled, stream.child("reperturb", cycle, j), T_a)
        for j, member in enumerate(ensemble.members)
    )
    return Ensemble(tuple(members))
