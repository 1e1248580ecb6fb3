"""Randomized-data ensemble Kalman filter.

The analysis never forms the observation matrix H or the state covariance.
Observations are evaluated member by member, and the inverse of
H C H^T + R is applied through the Sherman-Morrison-Woodbury identity

    (R + HA HA^T / (N-1))^-1 = R^-1 - R^-1 HA M^-1 HA^T R^-1 / (N-1),
    M = I + HA^T R^-1 HA / (N-1),

which only needs a Cholesky factorization of the N x N matrix M, because R
is diagonal. When there are fewer observations than members the m x m
innovation covariance is factored directly instead; both forms are exact.
"""

import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy import linalg

from fireda.models.grid import Grid
from fireda.models.observation import AnalysisConfig, ObservationSpec, Variable
from fireda.models.state import FireState
from fireda.services.fields import flatten
from fireda.utils.errors import AnalysisError, ObservationError, ValidationError
from fireda.utils.seeding import SeedStream

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def observe(u: FloatArray, spec: ObservationSpec) -> FloatArray:
    """Select the observed entries of a state vector or of every matrix column.

    Args:
        u: State vector (n,) or ensemble matrix (n, N)
        spec: Observation specification

    Returns:
        Observed values, shape (m,) or (m, N)

    Raises:
        ObservationError: If an index falls outside the state
    """
    u = np.asarray(u, dtype=np.float64)
    indices = spec.state_indices
    n = u.shape[0]
    if indices.min() < 0 or indices.max() >= n or np.any(spec.cells >= spec.n_cells):
        raise ObservationError(
            f"Observation indices out of range for a state of length {n}", code="OBS_004"
        )
    return u[indices]


def perturb_data(
    d: npt.ArrayLike, r_diag: npt.ArrayLike, N: int, stream: SeedStream
) -> FloatArray:
    """Data matrix whose column j is d plus N(0, diag(r)) noise.

    Column j is drawn from the substream labelled j.

    Raises:
        ValidationError: If N < 1 or a variance is negative
    """
    if N < 1:
        raise ValidationError(f"N must be at least 1, got {N}", code="ENKF_004")
    data = np.asarray(d, dtype=np.float64)
    r = np.asarray(r_diag, dtype=np.float64)
    if np.any(r < 0):
        raise ValidationError("Data error variances must be non-negative", code="ENKF_004")
    scale = np.sqrt(r)
    columns = [
        data + scale * stream.child(j).generator().standard_normal(data.size) for j in range(N)
    ]
    return np.column_stack(columns)


def ensemble_stats(U: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Ensemble mean and anomaly matrix.

    Raises:
        ValidationError: If U has fewer than two columns
    """
    U = np.asarray(U, dtype=np.float64)
    if U.ndim != 2 or U.shape[1] < 2:
        raise ValidationError("Ensemble matrix needs at least 2 columns", code="ENKF_004")
    mean = U.mean(axis=1)
    return mean, U - mean[:, None]


def analysis_with_observations(
    U_f: FloatArray, HU_f: FloatArray, D: FloatArray, r_diag: npt.ArrayLike
) -> FloatArray:
    """Kalman update given observed members and data.

    Args:
        U_f: Forecast ensemble (n, N)
        HU_f: Observations of each member (m, N)
        D: Data matrix (m, N)
        r_diag: Diagonal of the data error covariance (m,)

    Returns:
        Analysis ensemble (n, N)

    Raises:
        AnalysisError: If an input is not finite or the covariance cannot be factored
        ValidationError: If shapes disagree or a variance is not positive
    """
    _, A = ensemble_stats(U_f)
    HU = np.asarray(HU_f, dtype=np.float64)
    D = np.asarray(D, dtype=np.float64)
    r = np.asarray(r_diag, dtype=np.float64)
    N = A.shape[1]
    if HU.shape != D.shape or HU.shape[1] != N or r.shape != (HU.shape[0],):
        raise ValidationError("Observation, data and variance shapes disagree", code="ENKF_004")
    if not np.all(r > 0):
        raise ValidationError("Data error variances must be positive", code="ENKF_004")
    for name, array in (("forecast", U_f), ("observations", HU), ("data", D)):
        if not np.isfinite(array).all():
            raise AnalysisError(f"Non-finite {name} in analysis input", code="ENKF_002")

    scale = 1.0 / (N - 1)
    HA = HU - HU.mean(axis=1, keepdims=True)
    Y = D - HU
    P_inv_Y = _solve_innovation(HA, Y, r, scale)
    return np.asarray(U_f, dtype=np.float64) + scale * (A @ (HA.T @ P_inv_Y))


def _solve_innovation(HA: FloatArray, Y: FloatArray, r: FloatArray, scale: float) -> FloatArray:
    """Apply (diag(r) + scale HA HA^T)^-1 to Y, factoring the smaller of the two forms."""
    m, N = HA.shape
    if m < N:
        P = scale * (HA @ HA.T)
        P[np.diag_indices(m)] += r
        try:
            factor = linalg.cho_factor(P)
        except linalg.LinAlgError as e:
            raise AnalysisError(
                f"Cholesky factorization of the innovation covariance failed: {e}",
                code="ENKF_003",
            ) from e
        return np.asarray(linalg.cho_solve(factor, Y), dtype=np.float64)

    r_inv = 1.0 / r
    r_inv_HA = r_inv[:, None] * HA
    M = np.eye(N) + scale * (HA.T @ r_inv_HA)
    try:
        factor = linalg.cho_factor(M)
    except linalg.LinAlgError as e:
        raise AnalysisError(f"Cholesky factorization of M failed: {e}", code="ENKF_003") from e
    r_inv_Y = r_inv[:, None] * Y
    return np.asarray(
        r_inv_Y - scale * (r_inv_HA @ linalg.cho_solve(factor, HA.T @ r_inv_Y)), dtype=np.float64
    )


def analysis(
    U_f: FloatArray, spec: ObservationSpec, cfg: AnalysisConfig | None = None
) -> FloatArray:
    """EnKF analysis of a forecast ensemble against observations.

    With data perturbation on, member j's data noise comes from the substream
    ("data", cfg.cycle, j) of cfg.seed.

    Args:
        U_f: Forecast ensemble matrix (n, N)
        spec: Observed entries, values and variances
        cfg: Analysis settings

    Returns:
        Analysis ensemble matrix (n, N)
    """
    cfg = cfg or AnalysisConfig()
    HU = observe(U_f, spec)
    N = HU.shape[1]
    if cfg.perturb_data:
        stream = SeedStream(cfg.seed).child("data", cfg.cycle)
        D = perturb_data(spec.values, spec.variances, N, stream)
    else:
        D = np.repeat(spec.values[:, None], N, axis=1)
    return analysis_with_observations(U_f, HU, D, spec.variances)


def strided_observation_spec(
    state: FireState,
    stride: int,
    variance: float,
    variables: Sequence[Variable] = (Variable.T, Variable.S),
) -> ObservationSpec:
    """Sample a state every stride nodes along each axis.

    Args:
        state: State supplying the observed values
        stride: Node spacing of the samples
        variance: Error variance of every sample
        variables: Sampled variables

    Returns:
        Observation specification, T samples first

    Raises:
        ValidationError: If stride < 1 or no variable is given
    """
    if stride < 1:
        raise ValidationError(f"stride must be at least 1, got {stride}", code="OBS_005")
    if not variables:
        raise ValidationError("At least one observed variable is required", code="OBS_005")
    grid = state.grid
    columns = np.arange(0, grid.nx, stride)
    if grid.dims == 1:
        cells = columns
    else:
        rows = np.arange(0, grid.ny, stride)
        cells = (rows[:, None] * grid.nx + columns[None, :]).ravel()
    tags = np.concatenate([np.full(cells.size, int(v)) for v in variables])
    all_cells = np.tile(cells, len(variables))
    values = flatten(state)[tags * grid.cells + all_cells]
    return ObservationSpec(
        cells=all_cells,
        variables=tags,
        values=values,
        variances=np.full(all_cells.size, float(variance)),
        n_cells=grid.cells,
    )


def gradient_observation(U: FloatArray, grid: Grid) -> FloatArray:
    """Forward-difference gradient of the temperature block of every column.

    Returns:
        Stacked x then y differences, shape (m_g, N)
    """
    U = np.asarray(U, dtype=np.float64)
    if U.ndim == 1:
        U = U[:, None]
    N = U.shape[1]
    T = U[: grid.cells].T.reshape((N, *grid.shape))
    parts = [np.diff(T, axis=-1).reshape(N, -1)]
    if grid.dims == 2:
        parts.append(np.diff(T, axis=1).reshape(N, -1))
    return np.concatenate(parts, axis=1).T / grid.dx


def regularize(
    U: FloatArray,
    grid: Grid,
    rho: float,
    stream: SeedStream,
    perturb_data_values: bool = True,
) -> FloatArray:
    """Second analysis pass pulling member gradients towards the mean gradient.

    Args:
        U: Ensemble matrix (n, N)
        grid: Mesh of the members
        rho: Variance of the gradient observation; 0 skips the pass
        stream: Substream for the data noise, member j uses label j
        perturb_data_values: Randomize the gradient data per member

    Returns:
        Regularized ensemble matrix
    """
    if rho < 0:
        raise ValidationError(f"rho must be non-negative, got {rho}", code="ENKF_001")
    if rho == 0:
        return np.asarray(U, dtype=np.float64)
    mean, _ = ensemble_stats(U)
    HU = gradient_observation(U, grid)
    d = gradient_observation(mean, grid)[:, 0]
    r = np.full(d.size, float(rho))
    N = HU.shape[1]
    if perturb_data_values:
        D = perturb_data(d, r, N, stream)
    else:
        D = np.repeat(d[:, None], N, axis=1)
    return analysis_with_observations(U, HU, D, r)
