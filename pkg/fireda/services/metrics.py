"""Diagnostics comparing ensemble and reference fields."""

import math

import numpy as np
import numpy.typing as npt
from scipy.spatial.distance import cdist
from skimage import measure

from fireda.models.grid import Grid
from fireda.utils.errors import ValidationError

FloatArray = npt.NDArray[np.float64]


def rmse(a: npt.ArrayLike, b: npt.ArrayLike) -> float:
    """Root mean square difference of two conforming fields."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise ValidationError(f"Shapes {x.shape} and {y.shape} differ", code="FIELD_004")
    return float(np.sqrt(np.mean((x - y) ** 2)))


def contour_points(field: FloatArray, grid: Grid, level: float) -> FloatArray:
    """Midpoints (x, y) in meters of the marching-squares segments of a level set.

    Returns:
        Array of shape (k, 2); k = 0 when the level is never crossed
    """
    if grid.dims != 2:
        raise ValidationError("Contours need a 2D field", code="FIELD_001")
    values = np.asarray(field, dtype=np.float64)
    if values.shape != grid.shape:
        raise ValidationError("Field does not conform to the grid", code="FIELD_004")
    if not (values.min() < level < values.max()):
        return np.empty((0, 2))
    midpoints = []
    for path in measure.find_contours(values, level):
        if len(path) < 2:
            continue
        mid = 0.5 * (path[1:] + path[:-1])
        midpoints.append(mid[:, ::-1] * grid.dx)
    if not midpoints:
        return np.empty((0, 2))
    return np.concatenate(midpoints)


def front_distance(
    T_mean: FloatArray, T_ref: FloatArray, grid: Grid, level: float
) -> float:
    """Symmetric mean nearest-point distance between two level-set contours.

    Each contour's segment midpoints are matched to the closest midpoint of
    the other contour; the two mean distances are averaged.

    Args:
        T_mean: Field whose front is assessed (usually the ensemble mean)
        T_ref: Reference field
        grid: Mesh of both fields
        level: Temperature of the level set (K)

    Returns:
        Distance in meters, or inf if either contour is empty
    """
    ours = contour_points(T_mean, grid, level)
    theirs = contour_points(T_ref, grid, level)
    if len(ours) == 0 or len(theirs) == 0:
        return math.inf
    distances = cdist(ours, theirs)
    forward = distances.min(axis=1).mean()
    backward = distances.min(axis=0).mean()
    return float(0.5 * (forward + backward))
