"""Entry point for the fireda command line."""

import argparse
import sys
from collections.abc import Sequence

from fireda.config import ExperimentConfig, load_config
from fireda.utils.errors import (
    ConfigError,
    FiredaError,
    NumericalDivergenceError,
    SnapshotFormatError,
)
from fireda.utils.log import configure_logging

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subcommand per workflow."""
    parser = argparse.ArgumentParser(
        prog="fireda", description="fireda - Wildfire model with ensemble data assimilation"
    )
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging verbosity (default: INFO)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name, text in (
        ("calibrate1d", "Identify coefficients and measure the 1D traveling wave"),
        ("simulate", "Run a single fire simulation without assimilation"),
        ("assimilate", "Run the twin data assimilation experiment"),
    ):
        sub = commands.add_parser(name, help=text)
        sub.add_argument("--config", required=True, help="Path to a JSON experiment file")
        sub.add_argument("--seed", type=int, help="Override the root seed")
        sub.add_argument("--out", help="Override the output directory")
        sub.add_argument(
            "--snapshots",
            type=int,
            metavar="K",
            help="Write binary snapshots every K cycles (every K-th stored step for simulate)",
        )
        sub.add_argument("--workers", type=int, help="Worker threads for ensemble members")

    inspect = commands.add_parser("inspect", help="Describe a snapshot or export it to CSV")
    inspect.add_argument("snapshot", help="Snapshot file")
    inspect.add_argument("--csv", help="Write x, y, T, S rows to this file")

    report = commands.add_parser("report", help="Browse the results of an output directory")
    report.add_argument("--out", required=True, help="Experiment output directory")
    return parser


def _load(args: argparse.Namespace) -> ExperimentConfig:
    config = load_config(args.config)
    return config.with_overrides(
        seed=args.seed, directory=args.out, snapshots=args.snapshots, workers=args.workers
    )


def _run(args: argparse.Namespace) -> int:
    if args.command == "calibrate1d":
        from fireda.services.experiments import run_calibrate_1d

        report = run_calibrate_1d(_load(args))
        print(f"status: {report.status}")
        print(f"lambda = {report.nondim.lam:.4e}, beta = {report.nondim.beta:.4f}")
        if report.measured is not None:
            wave = report.measured
            print(
                f"Tmax = {wave.Tmax:.1f} K, width = {wave.width:.2f} m, "
                f"speed = {wave.speed:.4f} m/s"
            )
        return EXIT_OK

    if args.command == "simulate":
        from fireda.services.experiments import run_simulation

        result = run_simulation(_load(args))
        for key, value in result.summary.items():
            print(f"{key}: {value:.6g}")
        return EXIT_OK

    if args.command == "assimilate":
        from fireda.services.experiments import run_twin_experiment

        twin = run_twin_experiment(_load(args))
        final = twin.reports[-1]
        print(
            f"cycle {final.cycle}: front distance {final.front_distance:.2f} m "
            f"(no assimilation {final.control_front_distance:.2f} m)"
        )
        return EXIT_OK

    if args.command == "inspect":
        from fireda.storage.snapshot import export_csv, read_snapshot

        state = read_snapshot(args.snapshot)
        grid = state.grid
        print(f"{grid.dims}D grid {grid.nx}x{grid.ny}, dx = {grid.dx} m, t = {state.time} s")
        print(f"T in [{state.T.min():.2f}, {state.T.max():.2f}] K")
        print(f"total fuel {state.total_fuel():.6g}")
        if args.csv:
            export_csv(state, args.csv)
            print(f"Wrote {args.csv}")
        return EXIT_OK

    from fireda.ui.app import ReportApp

    ReportApp(args.out).run()
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the command line.

    Args:
        argv: Arguments (defaults to sys.argv)

    Returns:
        Exit code: 0 success, 2 configuration error, 3 divergence, 4 I/O or
        snapshot format error, 1 anything else
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    try:
        return _run(args)
    except ConfigError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalDivergenceError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except (OSError, SnapshotFormatError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO
    except FiredaError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILURE
    except KeyboardInterrupt:
        print("\nInterrupted by user")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
