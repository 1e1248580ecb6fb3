"""Experiment workflows: 1D calibration, free simulation and the twin experiment."""

import dataclasses
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import numpy.typing as npt

from fireda.config import ExperimentConfig
from fireda.models.coefficients import ModelCoefficients
from fireda.models.ensemble import Ensemble
from fireda.models.grid import Grid
from fireda.models.observation import AnalysisConfig
from fireda.models.report import CalibrationReport, CycleReport
from fireda.models.state import FireState
from fireda.models.wave import Trajectory, WaveMetrics
from fireda.services import enkf, kinetics, solver
from fireda.services.ensemble import init_ensemble, reperturb
from fireda.services.metrics import contour_points, front_distance, rmse
from fireda.services.validation import (
    check_fuel_nonincreasing,
    require_calibration,
    require_dims,
    require_run_length,
)
from fireda.storage import tables
from fireda.storage.snapshot import write_snapshot
from fireda.utils.errors import (
    NoSustainedWaveError,
    NumericalDivergenceError,
    WaveLeftDomainError,
)
from fireda.utils.seeding import SeedStream

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_NO_WAVE = "no sustained wave"
STATUS_LEFT_DOMAIN = "wave left domain"
DEFAULT_FRONT_RISE = 400.0
DEFAULT_SNAPSHOT_COUNT = 50
HEAT_BALANCE_SPAN = 1.25


def default_snapshot_every(config: ExperimentConfig) -> int:
    """Step cadence giving about fifty snapshots over the run."""
    if config.time.snapshot_every is not None:
        return config.time.snapshot_every
    steps = max(1, math.ceil(config.time.t_end / config.time.dt))
    return max(1, steps // DEFAULT_SNAPSHOT_COUNT)


def initial_state(
    config: ExperimentConfig,
    grid: Grid,
    coeffs: ModelCoefficients,
    center: tuple[float, ...],
    stream: SeedStream,
) -> FireState:
    """Ambient temperature, configured fuel and an ignition at center.

    The fuel noise comes from the ("fuel",) substream, so states ignited at
    different places share the same fuel map.
    """
    state = FireState.uniform(grid, coeffs.T_a)
    fuel = config.fuel
    if fuel.break_width > 0 or fuel.noise > 0:
        state = solver.apply_fuel_break_and_noise(
            state, fuel.break_width, fuel.noise, stream.child("fuel").generator()
        )
    ignition = config.ignition
    if ignition.kind == "gaussian":
        return solver.ignite_gaussian_1d(
            state, center[0], ignition.sigma, ignition.temperature, coeffs.T_a
        )
    if ignition.kind == "disc":
        return solver.ignite_disc_2d(
            state, (center[0], center[1]), ignition.radius, ignition.temperature
        )
    return solver.ignite_square_2d(
        state, (center[0], center[1]), ignition.side, ignition.temperature
    )


def ignition_center(config: ExperimentConfig, grid: Grid) -> tuple[float, ...]:
    """Configured ignition point, defaulting to the domain centre in 1D and
    to (Lx/4, Ly/2) in 2D."""
    if config.ignition.center is not None:
        return config.ignition.center
    if grid.dims == 1:
        return (0.5 * grid.length_x,)
    return (0.25 * grid.length_x, 0.5 * grid.length_y)


# Calibration


def measure_or_none(
    trajectory: Trajectory, T_a: float, reference_level: float, min_rise: float
) -> tuple[WaveMetrics | None, str, str]:
    """Wave metrics, or None with the status and reason no wave was found."""
    try:
        return solver.measure_wave(trajectory, T_a, reference_level, min_rise), STATUS_OK, ""
    except WaveLeftDomainError as e:
        return None, STATUS_LEFT_DOMAIN, e.message
    except NoSustainedWaveError as e:
        return None, STATUS_NO_WAVE, e.message


def front_displacement(
    trajectory: Trajectory, T_a: float, reference_level: float, min_rise: float
) -> float | None:
    """Distance the leading edge moved between the first and last snapshot."""
    start = solver.leading_edge(trajectory.states[0], T_a, reference_level, min_rise)
    end = solver.leading_edge(trajectory.final, T_a, reference_level, min_rise)
    if start is None or end is None:
        return None
    return end - start


def calibrate(config: ExperimentConfig) -> tuple[CalibrationReport, Trajectory]:
    """Identify coefficients, simulate the 1D wave and measure it.

    Args:
        config: 1D experiment with a calibration section

    Returns:
        Tuple (report, trajectory)

    Raises:
        ConfigError: If the config is not a 1D calibration
        NumericalDivergenceError: If the simulation diverges
    """
    require_dims(config, 1, "calibration")
    require_run_length(config)
    calibration = require_calibration(config)
    coeffs = config.model.to_coefficients()
    T_a, T_0 = coeffs.T_a, coeffs.cutoff

    B, C = kinetics.identify_BC(calibration.Ti, calibration.Tc, T_a, T_0)
    A = kinetics.identify_A(C, calibration.t_c)
    equilibria = kinetics.equilibrium_points(B, C, T_a, T_0)
    logger.info("Identified B=%.5g K, C=%.5g 1/K, A=%.5g K/s", B, C, A)

    grid = config.grid.to_grid()
    state = initial_state(
        config, grid, coeffs, ignition_center(config, grid), SeedStream(config.seed)
    )
    trajectory = solver.run(
        state, coeffs, config.time.t_end, config.time.dt, default_snapshot_every(config)
    )
    measured, status, reason = measure_or_none(
        trajectory, T_a, calibration.reference_level, calibration.min_rise
    )
    nondim = kinetics.nondim_params(coeffs)

    target = calibration.target.to_metrics() if calibration.target else None
    rescaled = None
    extras: dict[str, Any] = {
        "model_equilibria": kinetics.equilibrium_points(coeffs.B, coeffs.C, T_a, T_0),
        "cooling_time": kinetics.cooling_time(A, C),
        "potential_at_Ti": kinetics.heat_potential(calibration.Ti, B, C, T_a, T_0),
        "potential_at_Tc": kinetics.heat_potential(calibration.Tc, B, C, T_a, T_0),
        "diffusion": str(coeffs.diffusion),
    }
    if measured is not None:
        scales = kinetics.natural_scales(coeffs)
        dimensionless = kinetics.nondimensionalize_wave(measured, scales)
        extras["natural_scales"] = scales
        extras["dimensionless_wave"] = dimensionless
        if target is not None:
            fitted = kinetics.scales_from_wave(dimensionless, target)
            rescaled = kinetics.rescale_coefficients(nondim, fitted, T_a, coeffs.diffusion)
            extras["fitted_scales"] = fitted
        logger.info(
            "Measured wave: Tmax=%.1f K, width=%.2f m, speed=%.4f m/s",
            measured.Tmax,
            measured.width,
            measured.speed,
        )
    else:
        logger.warning("%s: %s", status.capitalize(), reason)

    report = CalibrationReport(
        status=status,
        identified_B=B,
        identified_C=C,
        identified_A=A,
        coefficients=coeffs,
        nondim=nondim,
        equilibria=equilibria,
        measured=measured,
        target=target,
        rescaled=rescaled,
        displacement=front_displacement(
            trajectory, T_a, calibration.reference_level, calibration.min_rise
        ),
        detail=reason,
        extras=extras,
    )
    return report, trajectory


def run_calibrate_1d(config: ExperimentConfig) -> CalibrationReport:
    """Calibration workflow writing the report, wave table and trajectory.

    Files written to the output directory: calibration_report.json, wave.csv,
    heat_balance.csv, trajectory.csv, and sensor.csv when a sensor position is
    configured.
    """
    report, trajectory = calibrate(config)
    calibration = require_calibration(config)
    out = Path(config.output.directory)
    tables.write_json(report.to_dict(), out / tables.CALIBRATION_REPORT_FILE)
    rows = []
    for name in ("Tmax", "width", "speed"):
        measured = getattr(report.measured, name) if report.measured else math.nan
        target = getattr(report.target, name) if report.target else math.nan
        rows.append((name, measured, target))
    tables.write_rows(out / "wave.csv", ("quantity", "measured", "target"), rows)
    coeffs = report.coefficients
    T, f, U = kinetics.heat_balance_curve(
        report.identified_B,
        report.identified_C,
        coeffs.T_a,
        coeffs.cutoff,
        HEAT_BALANCE_SPAN * calibration.Tc,
    )
    tables.write_rows(out / tables.HEAT_BALANCE_FILE, ("T", "f", "U"), zip(T, f, U))
    tables.write_trajectory(trajectory, out / "trajectory.csv")
    if calibration.sensor_x is not None:
        times, temperatures = solver.sensor_profile(trajectory, calibration.sensor_x)
        tables.write_sensor(times, temperatures, out / "sensor.csv")
    logger.info("Calibration %s; results in %s", report.status, out)
    return report


# Free simulation


@dataclass(frozen=True, eq=False)
class SimulationResult:
    """Outcome of a single simulation.

    Attributes:
        trajectory: Stored snapshots
        summary: Burned area, remaining fuel and peak temperature
    """

    trajectory: Trajectory
    summary: dict[str, float]


def run_simulation(config: ExperimentConfig) -> SimulationResult:
    """Simulate one fire from the configured ignition without assimilation.

    Writes final.bin, summary.json and, when output.snapshots is K > 0, every
    K-th stored snapshot.
    """
    require_run_length(config)
    coeffs = config.model.to_coefficients()
    grid = config.grid.to_grid()
    state = initial_state(
        config, grid, coeffs, ignition_center(config, grid), SeedStream(config.seed)
    )
    trajectory = solver.run(
        state, coeffs, config.time.t_end, config.time.dt, config.time.snapshot_every
    )
    final = trajectory.final
    burned = np.count_nonzero(state.S - final.S > 0.5)
    summary = {
        "time": final.time,
        "burned_area": float(burned) * grid.dx ** grid.dims,
        "initial_fuel": state.total_fuel(),
        "remaining_fuel": final.total_fuel(),
        "peak_temperature": float(final.T.max()),
    }
    check_fuel_nonincreasing(state, final, "free")

    out = Path(config.output.directory)
    every = config.output.snapshots
    if every:
        for index in range(0, len(trajectory), every):
            write_snapshot(trajectory.states[index], out / f"snapshot_{index:04d}.bin")
    write_snapshot(final, out / "final.bin")
    tables.write_json(summary, out / "summary.json")
    logger.info(
        "Simulated to t=%g s: burned area %.1f m^2, remaining fuel %.4g",
        final.time,
        summary["burned_area"],
        summary["remaining_fuel"],
    )
    return SimulationResult(trajectory=trajectory, summary=summary)


# Twin experiment


@dataclass(frozen=True, eq=False)
class TwinResult:
    """Outcome of the twin experiment.

    Attributes:
        reports: One report per cycle
        ensemble: Final analysis ensemble
        reference: Final reference state
        comparison: Final comparison state (never assimilated)
    """

    reports: tuple[CycleReport, ...]
    ensemble: Ensemble
    reference: FireState
    comparison: FireState


class TwinExperiment:
    """Assimilate observations of a reference fire into an ensemble built
    around a displaced comparison fire."""

    def __init__(self, config: ExperimentConfig) -> None:
        """Initialize experiment.

        Args:
            config: 2D experiment configuration

        Raises:
            ConfigError: If the grid is not 2D
        """
        require_dims(config, 2, "twin experiment")
        self.config = config
        self.coeffs = config.model.to_coefficients()
        self.grid = config.grid.to_grid()
        self.stream = SeedStream(config.seed)
        self.params = config.ensemble.to_params()
        assimilation = config.assimilation
        self.level = (
            assimilation.front_level
            if assimilation.front_level is not None
            else self.coeffs.T_a + DEFAULT_FRONT_RISE
        )
        self.out = Path(config.output.directory)

    def initial_states(self) -> tuple[FireState, FireState]:
        """Reference and comparison states, the reference shifted along x."""
        center = ignition_center(self.config, self.grid)
        shifted = (center[0] + self.config.assimilation.offset, *center[1:])
        comparison = initial_state(self.config, self.grid, self.coeffs, center, self.stream)
        reference = initial_state(self.config, self.grid, self.coeffs, shifted, self.stream)
        return reference, comparison

    def _forecast(self, state: FireState, t_end: float, cycle: int, label: str) -> FireState:
        try:
            final = solver.run(state, self.coeffs, t_end, self.config.time.dt).final
        except NumericalDivergenceError as e:
            raise e.located(cycle=cycle) from e
        check_fuel_nonincreasing(state, final, label)
        return final

    def analyze(self, ensemble: Ensemble, reference: FireState, cycle: int) -> Ensemble:
        """Data pass followed by the gradient regularization pass."""
        assimilation = self.config.assimilation
        spec = enkf.strided_observation_spec(reference, assimilation.stride, assimilation.variance)
        settings = AnalysisConfig(
            rho=assimilation.rho,
            perturb_data=assimilation.perturb_data,
            seed=self.config.seed,
            cycle=cycle,
        )
        U = enkf.analysis(ensemble.as_matrix(), spec, settings)
        U = enkf.regularize(
            U,
            self.grid,
            settings.rho,
            self.stream.child("regularize", cycle),
            perturb_data_values=settings.perturb_data,
        )
        return Ensemble.from_matrix(U, self.grid, ensemble.time)

    def _write_cycle_contours(
        self,
        cycle: int,
        reference_T: npt.NDArray[np.float64],
        prior_T: npt.NDArray[np.float64],
        posterior_T: npt.NDArray[np.float64],
    ) -> None:
        fields = {"reference": reference_T, "prior": prior_T, "posterior": posterior_T}
        for name, field in fields.items():
            points = contour_points(field, self.grid, self.level)
            tables.write_points(points, self.out / f"contour_cycle_{cycle:03d}_{name}.csv")

    def _write_cycle_snapshots(
        self, cycle: int, ensemble: Ensemble, reference: FireState, comparison: FireState
    ) -> None:
        prefix = self.out / f"cycle_{cycle:03d}"
        write_snapshot(reference, f"{prefix}_reference.bin")
        write_snapshot(ensemble.mean_state(), f"{prefix}_mean.bin")
        write_snapshot(comparison, f"{prefix}_comparison.bin")

    def run(self) -> TwinResult:
        """Run all cycles and write metrics, timing and the contour point lists.

        Every cycle writes the reference, prior mean and posterior mean contours.
        When output.snapshots is K > 0, cycles divisible by K also write the
        reference, ensemble mean and comparison snapshots.

        Raises:
            NumericalDivergenceError: Annotated with the member and cycle that diverged
        """
        config = self.config
        assimilation = config.assimilation
        workers = config.output.workers
        reference, comparison = self.initial_states()
        ensemble = init_ensemble(
            comparison, config.ensemble.size, self.params, self.stream, self.coeffs.T_a, workers
        )
        reports: list[CycleReport] = []
        for cycle in range(1, assimilation.cycles + 1):
            started = time.perf_counter()
            t_next = comparison.time + assimilation.cycle_length
            try:
                ensemble = solver.advance_members(
                    ensemble, self.coeffs, t_next, config.time.dt, workers
                )
            except NumericalDivergenceError as e:
                raise e.located(member=e.member, cycle=cycle) from e
            reference = self._forecast(reference, t_next, cycle, "reference")
            comparison = self._forecast(comparison, t_next, cycle, "comparison")

            prior_T = ensemble.mean_T()
            rmse_pre = rmse(prior_T, reference.T)
            ensemble = self.analyze(ensemble, reference, cycle)
            mean_T = ensemble.mean_T()
            self._write_cycle_contours(cycle, reference.T, prior_T, mean_T)
            report = CycleReport(
                cycle=cycle,
                time=t_next,
                rmse_pre=rmse_pre,
                rmse_post=rmse(mean_T, reference.T),
                front_distance=front_distance(mean_T, reference.T, self.grid, self.level),
                control_front_distance=front_distance(
                    comparison.T, reference.T, self.grid, self.level
                ),
                variance_mean=ensemble.mean_T_variance(),
                wall_time=0.0,
            )
            ensemble = reperturb(
                ensemble,
                self.params,
                assimilation.reperturb,
                self.stream,
                self.coeffs.T_a,
                cycle=cycle,
                n_jobs=workers,
            )
            every = config.output.snapshots
            if every and cycle % every == 0:
                self._write_cycle_snapshots(cycle, ensemble, reference, comparison)
            elapsed = time.perf_counter() - started
            report = dataclasses.replace(report, wall_time=elapsed)
            reports.append(report)
            logger.info(
                "Cycle %d t=%g s: rmse %.3f -> %.3f K, front %.2f m (control %.2f m), %.1f s",
                cycle,
                t_next,
                report.rmse_pre,
                report.rmse_post,
                report.front_distance,
                report.control_front_distance,
                elapsed,
            )

        result = TwinResult(
            reports=tuple(reports), ensemble=ensemble, reference=reference, comparison=comparison
        )
        self.write(result)
        return result

    def write(self, result: TwinResult) -> None:
        """Write metrics.csv, timing.csv and the final contour point lists."""
        tables.write_metrics(result.reports, self.out / tables.METRICS_FILE)
        tables.write_timing(result.reports, self.out / tables.TIMING_FILE)
        fields = {
            "mean": result.ensemble.mean_T(),
            "reference": result.reference.T,
            "comparison": result.comparison.T,
        }
        for name, field in fields.items():
            points = contour_points(field, self.grid, self.level)
            tables.write_points(points, self.out / f"contour_{name}.csv")
        logger.info("Twin experiment results in %s", self.out)


def run_twin_experiment(config: ExperimentConfig) -> TwinResult:
    """Run the twin experiment described by config."""
    return TwinExperiment(config).run()
