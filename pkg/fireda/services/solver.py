"""Finite-difference discretization and explicit Euler integration.

Heat equation:  dT/dt = div(k grad T) - v . grad T + A (S r(T) - C (T - T_a))
Fuel equation:  dS/dt = -C_S S r(T)

Diffusion uses second-order central differences, advection first-order upwind
differences, and every boundary is zero-flux through mirror ghost nodes.
"""

import logging
import math

import numpy as np
import numpy.typing as npt
import scipy.sparse as sp
from joblib import Parallel, delayed

from fireda.models.coefficients import DiffusionMode, ModelCoefficients
from fireda.models.ensemble import Ensemble
from fireda.models.grid import Grid
from fireda.models.state import FireState
from fireda.models.wave import Trajectory, WaveMetrics
from fireda.services.kinetics import reaction_rate
from fireda.utils.errors import (
    NoSustainedWaveError,
    NumericalDivergenceError,
    ValidationError,
    WaveLeftDomainError,
)

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

STEP_COUNT_TOLERANCE = 1e-9


def _axis_slices(ndim: int, axis: int) -> tuple[tuple[slice, ...], tuple[slice, ...]]:
    lower = [slice(None)] * ndim
    upper = [slice(None)] * ndim
    lower[axis] = slice(None, -1)
    upper[axis] = slice(1, None)
    return tuple(lower), tuple(upper)


def _pad_axis(field: FloatArray, axis: int) -> FloatArray:
    widths = [(1, 1) if a == axis else (0, 0) for a in range(field.ndim)]
    return np.pad(field, widths, mode="reflect")


def _spatial_axes(grid: Grid) -> list[tuple[int, int]]:
    """(array axis, wind component) pairs; x is always the last array axis."""
    if grid.dims == 1:
        return [(0, 0)]
    return [(1, 0), (0, 1)]


def diffusion_term(T: FloatArray, coeffs: ModelCoefficients, grid: Grid) -> FloatArray:
    """Divergence of the diffusive heat flux with zero-flux boundaries."""
    out = np.zeros_like(T)
    for axis, _ in _spatial_axes(grid):
        padded = _pad_axis(T, axis)
        gradient = np.diff(padded, axis=axis) / grid.dx
        if coeffs.diffusion is DiffusionMode.CUBIC:
            conductivity = coeffs.k * padded**3
            lower, upper = _axis_slices(T.ndim, axis)
            flux = 0.5 * (conductivity[lower] + conductivity[upper]) * gradient
        else:
            flux = coeffs.k * gradient
        out += np.diff(flux, axis=axis) / grid.dx
    return out


def advection_term(T: FloatArray, coeffs: ModelCoefficients, grid: Grid) -> FloatArray:
    """Upwind discretization of -v . grad T."""
    out = np.zeros_like(T)
    wind = coeffs.wind_vector(grid.dims)
    for axis, component in _spatial_axes(grid):
        v = wind[component]
        if v == 0.0:
            continue
        padded = _pad_axis(T, axis)
        n = T.shape[axis]
        if v > 0:
            behind = np.take(padded, range(0, n), axis=axis)
            gradient = (T - behind) / grid.dx
        else:
            ahead = np.take(padded, range(2, n + 2), axis=axis)
            gradient = (ahead - T) / grid.dx
        out -= v * gradient
    return out


def tendencies(
    state: FireState, coeffs: ModelCoefficients, grid: Grid | None = None
) -> tuple[FloatArray, FloatArray]:
    """Time derivatives of temperature and fuel.

    Args:
        state: Current state
        coeffs: Model coefficients
        grid: Mesh; must match the state's grid when given

    Returns:
        Tuple (dT/dt, dS/dt)

    Raises:
        ValidationError: If grid does not match the state
    """
    if grid is not None and grid != state.grid:
        raise ValidationError("Grid does not match the state's grid", code="SOLV_001")
    grid = state.grid
    rate = reaction_rate(state.T, coeffs)
    dT = (
        diffusion_term(state.T, coeffs, grid)
        + advection_term(state.T, coeffs, grid)
        + coeffs.A * (state.S * rate - coeffs.C * (state.T - coeffs.T_a))
    )
    dS = -coeffs.C_S * state.S * rate
    return dT, dS


def step_euler(state: FireState, coeffs: ModelCoefficients, dt: float) -> FireState:
    """Advance one forward Euler step, clamping fuel into [0, 1].

    Raises:
        ValidationError: If dt is not positive
        NumericalDivergenceError: If the new state is not finite
    """
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt}", code="SOLV_002")
    dT, dS = tendencies(state, coeffs)
    T = state.T + dt * dT
    S = np.clip(state.S + dt * dS, 0.0, 1.0)
    if not (np.isfinite(T).all() and np.isfinite(S).all()):
        bad = int(np.count_nonzero(~np.isfinite(T)) + np.count_nonzero(~np.isfinite(S)))
        finite_T = T[np.isfinite(T)]
        peak = float(np.abs(finite_T).max()) if finite_T.size else math.nan
        raise NumericalDivergenceError(
            f"Solution diverged at t={state.time + dt:g} s: {bad} non-finite values, "
            f"max finite |T| = {peak:.4g} K",
            code="SOLV_003",
            time=state.time + dt,
        )
    return FireState(T=T, S=S, grid=state.grid, time=state.time + dt)


def stable_time_step(coeffs: ModelCoefficients, grid: Grid, T_ref: float | None = None) -> float:
    """Largest dt the diffusion guard accepts, dx^2 / (4 k_eff)."""
    k_eff = coeffs.k
    if coeffs.diffusion is DiffusionMode.CUBIC:
        k_eff *= (T_ref if T_ref is not None else coeffs.T_a) ** 3
    return grid.dx**2 / (4.0 * k_eff)


def check_time_step(
    coeffs: ModelCoefficients, grid: Grid, dt: float, state: FireState | None = None
) -> bool:
    """Warn when dt exceeds the explicit diffusion stability limit.

    Returns:
        True when dt passes the guard
    """
    T_ref = float(state.T.max()) if state is not None else None
    limit = stable_time_step(coeffs, grid, T_ref)
    ok = dt <= limit
    if not ok:
        logger.warning(
            "Time step %.4g s exceeds the diffusion limit dx^2/(4 k_eff) = %.4g s; "
            "explicit differences are also known to go unstable when k/dx is small",
            dt,
            limit,
        )
    if coeffs.C > 0 and dt * coeffs.A * coeffs.C >= 1.0:
        logger.warning("Time step %.4g s is not below the cooling time 1/(AC)", dt)
        ok = False
    return ok


def run(
    state: FireState,
    coeffs: ModelCoefficients,
    t_end: float,
    dt: float,
    snapshot_every: int | None = None,
) -> Trajectory:
    """Integrate from state.time to t_end.

    Args:
        state: Initial state
        coeffs: Model coefficients
        t_end: Final time (s)
        dt: Time step (s); a shorter last step closes any remainder
        snapshot_every: Keep a snapshot every this many steps (None keeps
            only the initial and final states)

    Returns:
        Trajectory starting with the initial state and ending at t_end

    Raises:
        ValidationError: If t_end precedes the state or dt is not positive
        NumericalDivergenceError: If the solution diverges
    """
    if t_end < state.time:
        raise ValidationError(
            f"t_end {t_end} precedes the state time {state.time}", code="SOLV_004"
        )
    if not dt > 0:
        raise ValidationError(f"dt must be positive, got {dt}", code="SOLV_002")
    if snapshot_every is not None and snapshot_every < 1:
        raise ValidationError("snapshot_every must be at least 1", code="SOLV_004")
    if t_end == state.time:
        return Trajectory((state,))

    check_time_step(coeffs, state.grid, dt, state)
    span = t_end - state.time
    full_steps = math.floor(span / dt + STEP_COUNT_TOLERANCE)
    remainder = span - full_steps * dt
    steps = [dt] * full_steps
    if remainder > STEP_COUNT_TOLERANCE * dt:
        steps.append(remainder)

    snapshots = [state]
    current = state
    for index, h in enumerate(steps[:-1], start=1):
        current = step_euler(current, coeffs, h)
        if snapshot_every is not None and index % snapshot_every == 0:
            snapshots.append(current)
    current = step_euler(current, coeffs, steps[-1])
    snapshots.append(current.replace(time=t_end))
    logger.debug("Integrated %d steps to t=%g s", len(steps), t_end)
    return Trajectory(tuple(snapshots))


def laplacian_matrix(grid: Grid) -> sp.csr_matrix:
    """Sparse matrix of the Neumann Laplacian acting on row-major fields."""

    def line(n: int) -> sp.csr_matrix:
        main = np.full(n, -2.0)
        upper = np.ones(n - 1)
        lower = np.ones(n - 1)
        upper[0] = 2.0
        lower[-1] = 2.0
        return sp.diags([lower, main, upper], [-1, 0, 1], format="csr")

    lx = line(grid.nx)
    if grid.dims == 1:
        return (lx / grid.dx**2).tocsr()
    ly = line(grid.ny)
    matrix = sp.kron(sp.identity(grid.ny), lx) + sp.kron(ly, sp.identity(grid.nx))
    return (matrix / grid.dx**2).tocsr()


def ignite_gaussian_1d(
    state: FireState, x0: float, sigma: float, Tc: float, T_a: float
) -> FireState:
    """Set T to a Gaussian bump Tc exp(-(x - x0)^2 / sigma^2) above ambient.

    Raises:
        ValidationError: If the grid is not 1D or x0 lies outside the domain
    """
    grid = state.grid
    if grid.dims != 1:
        raise ValidationError("Gaussian ignition needs a 1D grid", code="SOLV_006")
    if not 0.0 <= x0 <= grid.length_x:
        raise ValidationError(f"Ignition point {x0} m is outside the domain", code="SOLV_006")
    if not sigma > 0:
        raise ValidationError(f"sigma must be positive, got {sigma}", code="SOLV_006")
    T = Tc * np.exp(-((grid.x - x0) ** 2) / sigma**2) + T_a
    return state.replace(T=T)


def ignite_square_2d(
    state: FireState, center: tuple[float, float], side: float, T_ign: float
) -> FireState:
    """Set T to T_ign at nodes strictly inside an axis-aligned square.

    Raises:
        ValidationError: If the grid is not 2D or the square misses the domain
    """
    grid = state.grid
    if grid.dims != 2:
        raise ValidationError("Square ignition needs a 2D grid", code="SOLV_006")
    if side == 0:
        return state
    cx, cy = center
    half = 0.5 * side
    if not (
        cx - half < grid.length_x and cx + half > 0 and cy - half < grid.length_y and cy + half > 0
    ):
        raise ValidationError("Ignition square does not intersect the domain", code="SOLV_006")
    xx, yy = grid.mesh()
    inside = (np.abs(xx - cx) < half) & (np.abs(yy - cy) < half)
    return state.replace(T=np.where(inside, T_ign, state.T))


def ignite_disc_2d(
    state: FireState, center: tuple[float, float], radius: float, T_ign: float
) -> FireState:
    """Set T to T_ign at nodes strictly inside a disc."""
    grid = state.grid
    if grid.dims != 2:
        raise ValidationError("Disc ignition needs a 2D grid", code="SOLV_006")
    xx, yy = grid.mesh()
    inside = (xx - center[0]) ** 2 + (yy - center[1]) ** 2 < radius**2
    return state.replace(T=np.where(inside, T_ign, state.T))


def apply_fuel_break_and_noise(
    state: FireState,
    break_width: float,
    noise_half_range: float,
    rng: np.random.Generator,
) -> FireState:
    """Full fuel load with a strip break through the centre and uniform noise.

    Args:
        state: State whose fuel is replaced
        break_width: Width of the fuel-free strip along y through x = Lx/2 (m)
        noise_half_range: Half width h of the uniform shift in [-h, h]
        rng: Source of the per-node shifts

    Returns:
        State with the new fuel field, clamped to [0, 1]

    Raises:
        ValidationError: If noise_half_range is outside [0, 1)
    """
    if not 0.0 <= noise_half_range < 1.0:
        raise ValidationError(
            f"noise_half_range must be in [0, 1), got {noise_half_range}", code="SOLV_007"
        )
    grid = state.grid
    x = grid.x if grid.dims == 1 else grid.mesh()[0]
    S = np.where(np.abs(x - 0.5 * grid.length_x) < 0.5 * break_width, 0.0, 1.0)
    if noise_half_range > 0:
        S = S + rng.uniform(-noise_half_range, noise_half_range, size=grid.shape)
    return state.replace(S=np.clip(S, 0.0, 1.0))


def _front_and_tail(
    state: FireState, T_a: float, reference_level: float, min_rise: float
) -> tuple[float, float, float]:
    """Leading crossing, trailing crossing and peak rise of the right-most wave.

    Raises:
        WaveLeftDomainError: If the hot region reaches the right end of the domain
        NoSustainedWaveError: If the state is not burning or has no interior crossing
    """
    rise = state.T - T_a
    peak = float(rise.max())
    if peak < min_rise:
        raise NoSustainedWaveError(
            f"No sustained wave: peak rise {peak:.3g} K at t={state.time:g} s "
            f"is below {min_rise:g} K",
            code="WAVE_003",
        )
    threshold = reference_level * peak
    above = rise >= threshold
    hot = np.flatnonzero(above)
    last = int(hot[-1])
    if last == rise.size - 1:
        raise WaveLeftDomainError(
            f"Wave reached the end of the domain by t={state.time:g} s", code="WAVE_004"
        )
    first = last
    while first > 0 and above[first - 1]:
        first -= 1
    if first == 0:
        raise NoSustainedWaveError(
            f"No sustained wave: hot region at t={state.time:g} s reaches the left boundary",
            code="WAVE_003",
        )
    x = state.grid.x
    dx = state.grid.dx
    front = x[last] + (rise[last] - threshold) / (rise[last] - rise[last + 1]) * dx
    tail = x[first - 1] + (threshold - rise[first - 1]) / (rise[first] - rise[first - 1]) * dx
    return float(front), float(tail), peak


def leading_edge(
    state: FireState, T_a: float, reference_level: float = 0.5, min_rise: float = 50.0
) -> float | None:
    """Position of the right-most crossing of the reference level, if any."""
    try:
        return _front_and_tail(state, T_a, reference_level, min_rise)[0]
    except NoSustainedWaveError:
        return None


def measure_wave(
    trajectory: Trajectory,
    T_a: float,
    reference_level: float = 0.5,
    min_rise: float = 50.0,
) -> WaveMetrics:
    """Peak, width and speed of the right-most traveling wave.

    Args:
        trajectory: 1D trajectory with at least two snapshots
        T_a: Ambient temperature (K)
        reference_level: Fraction of the peak rise defining the width
        min_rise: Smallest peak rise (K) that still counts as burning

    Returns:
        Wave metrics of the final snapshot, speed fitted over the final half

    Raises:
        ValidationError: If the trajectory is not 1D or too short
        WaveLeftDomainError: If the wave ran into the end of the domain
        NoSustainedWaveError: If no developed, advancing wave is found
    """
    if trajectory.final.grid.dims != 1:
        raise ValidationError("Wave measurement needs a 1D trajectory", code="WAVE_002")
    if len(trajectory) < 2:
        raise ValidationError("Wave measurement needs at least 2 snapshots", code="WAVE_002")

    front, tail, peak = _front_and_tail(trajectory.final, T_a, reference_level, min_rise)

    t_start, t_stop = trajectory.times[0], trajectory.times[-1]
    t_mid = t_start + 0.5 * (t_stop - t_start)
    times: list[float] = []
    fronts: list[float] = []
    for snapshot in trajectory.states:
        if snapshot.time < t_mid:
            continue
        times.append(snapshot.time)
        fronts.append(_front_and_tail(snapshot, T_a, reference_level, min_rise)[0])
    if len(times) < 2:
        raise ValidationError("Too few snapshots in the final half to fit a speed", code="WAVE_002")
    speed = float(np.polyfit(times, fronts, 1)[0])
    if not speed > 0:
        raise NoSustainedWaveError(
            f"No sustained wave: front speed {speed:.3g} m/s", code="WAVE_003"
        )
    return WaveMetrics(Tmax=peak, width=front - tail, speed=speed)


def sensor_profile(
    trajectory: Trajectory, x: float
) -> tuple[FloatArray, FloatArray]:
    """Temperature history at a fixed sensor location of a 1D trajectory."""
    grid = trajectory.final.grid
    if grid.dims != 1:
        raise ValidationError("Sensor profiles need a 1D trajectory", code="WAVE_002")
    times = np.array(trajectory.times)
    temperatures = np.array([np.interp(x, grid.x, state.T) for state in trajectory.states])
    return times, temperatures


def _advance_member(
    index: int, state: FireState, coeffs: ModelCoefficients, t_end: float, dt: float
) -> FireState:
    try:
        return run(state, coeffs, t_end, dt).final
    except NumericalDivergenceError as e:
        raise e.located(member=index) from e


def advance_members(
    ensemble: Ensemble,
    coeffs: ModelCoefficients,
    t_end: float,
    dt: float,
    n_jobs: int = 1,
) -> Ensemble:
    """Run every member to t_end on worker threads.

    Members share nothing mutable, so the result does not depend on n_jobs.

    Raises:
        NumericalDivergenceError: Annotated with the index of the diverging member
    """
    members = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_advance_member)(j, member, coeffs, t_end, dt)
        for j, member in enumerate(ensemble.members)
    )
    return Ensemble(tuple(members))
