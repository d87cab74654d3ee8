"""Command-line interface for the spintop tool."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Mapping, Sequence

import numpy as np

from . import __version__
from .config import RunConfig, load_config, render_template, run_config_from_mapping
from .core import (
    SUITE_NAMES,
    ConfigError,
    ConfigPoint,
    SpinorField,
    SpintopError,
    Trajectory,
    WaveField,
    build_calibration_document,
    build_report_document,
    build_trace_summary,
    config_metric,
    integrate_bundle,
    reduction_calibration,
    run_suites,
    write_report_document,
    write_trajectory_csv,
    zitterbewegung_report,
)
from .core.constants import a_from_mass
from .core.dynamics import ZITTERBEWEGUNG_MIN_SAMPLES
from .core.samples import plane_wave_psi, random_config_point, rng_for
from .core.spin import casimir_table, mode_field, on_shell_momentum, plane_wave_spinor_field

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_UNEXPECTED_ERROR = 3

TRACE_SUMMARY_NAME = "summary.json"


def _print_error(message: str) -> None:
    """Emit *message* to :data:`sys.stderr` with a standard prefix."""

    print(f"Error: {message}", file=sys.stderr)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config",
        dest="config_path",
        help="Path to the configuration file to use.",
    )
    common.add_argument(
        "--verbose",
        action="store_true",
        help="Enable verbose (DEBUG) logging output.",
    )
    common.add_argument(
        "--log-file",
        dest="log_file",
        help="Path to a file where logs should also be written.",
    )
    return common


def build_argument_parser() -> argparse.ArgumentParser:
    """Create and return the argument parser for the CLI."""

    parser = argparse.ArgumentParser(
        prog="spintop", description="Relativistic top verification toolkit"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "--emit-template",
        action="store_true",
        help="Print the default configuration as commented YAML and exit.",
    )
    common = _common_options()
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")

    verify = commands.add_parser(
        "verify", parents=[common], help="Run verification suites and write a report."
    )
    verify.add_argument(
        "--suite",
        dest="suites",
        action="append",
        choices=SUITE_NAMES,
        metavar="NAME",
        help=f"Suite to run; repeatable (choices: {', '.join(SUITE_NAMES)}).",
    )
    verify.add_argument("--seed", type=int, help="Override the configured random seed.")
    verify.add_argument("--report", dest="report_path", help="Override the report path.")

    calibrate = commands.add_parser(
        "calibrate",
        parents=[common],
        help="Measure the reduction constants and compare them with the printed values.",
    )
    calibrate.add_argument("--seed", type=int, help="Override the configured random seed.")

    trace = commands.add_parser(
        "trace", parents=[common], help="Integrate trajectories and export them as CSV."
    )
    trace.add_argument("--out", dest="out_dir", default=".", help="Output directory.")
    return parser


def parse_arguments(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse CLI arguments from *argv* or :data:`sys.argv`."""

    parser = build_argument_parser()
    args = parser.parse_args(argv)
    if not args.emit_template and args.command is None:
        parser.error("a command is required (verify, calibrate or trace)")
    return args


def _resolve_log_level(value: object) -> int:
    """Return the numeric log level for *value* with a safe default."""

    if isinstance(value, int):
        return value

    if isinstance(value, str):
        resolved = logging.getLevelName(value.upper())
        if isinstance(resolved, int):
            return resolved

    return logging.INFO


def configure_logging(config: Mapping[str, Any]) -> None:
    """Configure the root logger based on the provided *config*."""

    level_value = None
    file_value: str | None = None
    logging_config = config.get("logging")
    if isinstance(logging_config, Mapping):
        level_value = logging_config.get("level")
        file_candidate = logging_config.get("file")
        if isinstance(file_candidate, str) or file_candidate is None:
            file_value = file_candidate

    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if file_value:
        file_path = Path(file_value).expanduser()
        try:
            file_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(file_path, encoding="utf-8")
        except OSError as exc:  # pragma: no cover - filesystem errors are rare
            raise RuntimeError(
                f"Failed to configure log file '{file_path}': {exc}"
            ) from exc
        handlers.append(file_handler)

    logging.basicConfig(
        level=_resolve_log_level(level_value),
        handlers=handlers,
        force=True,
    )


def resolve_cli_config(args: argparse.Namespace) -> dict[str, Any]:
    """Return the effective configuration after applying CLI overrides."""

    config = load_config(args.config_path)

    if args.verbose:
        config.setdefault("logging", {})["level"] = "DEBUG"

    if getattr(args, "log_file", None) is not None:
        config.setdefault("logging", {})["file"] = args.log_file

    if getattr(args, "seed", None) is not None:
        config["seed"] = args.seed

    if getattr(args, "suites", None):
        config["suites"] = list(dict.fromkeys(args.suites))

    if getattr(args, "report_path", None):
        config.setdefault("report", {})["path"] = args.report_path

    return config


def cmd_verify(run: RunConfig) -> int:
    """Run the selected suites, write the report and return the exit code."""

    logger.info(
        "EVENT=VERIFY_START SUITES=%s SEED=%d", ",".join(run.suites), run.settings.seed
    )
    result = run_suites(run.settings, run.suites)
    document = build_report_document(
        result, run.settings, timings=run.report.timings, version=__version__
    )
    path = write_report_document(document, run.report.path)
    failed = [check.name for check in result.checks if not check.passed]
    logger.info(
        'EVENT=REPORT_WRITTEN FILE="%s" CHECKS=%d FAILED=%d',
        path,
        len(result.checks),
        len(failed),
    )
    for outcome in result.outcomes:
        print(f"{outcome.name}: {'pass' if outcome.passed else 'FAIL'}")
    if failed:
        _print_error(f"{len(failed)} check(s) failed: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    return EXIT_SUCCESS


def cmd_calibrate(run: RunConfig) -> int:
    """Measure the reduction constants and tabulate Casimir values per label."""

    settings = run.settings
    constants = settings.constants
    rng = rng_for(settings.seed, 10)
    points = [random_config_point(rng).as_array() for _ in range(settings.count("reduction"))]
    metric = config_metric(constants, settings.sign)
    calibration = reduction_calibration(constants, metric, points, sign=settings.sign)
    derived_a = a_from_mass(
        constants.m, hbar=constants.hbar, c=constants.c, gamma2=constants.gamma2
    )
    table = casimir_table()
    values = calibration.as_dict()
    print(f"R*a^2 = {values['curvature_a2']:.12g} (printed {values['curvature_a2_printed']:g})")
    print(f"c_casimir = {values['c_casimir']:.12g} (printed {values['c_casimir_printed']:g})")
    print(f"mass coefficient closure = {values['closure']:.3e}")
    print(f"a_from_mass = {derived_a:.12g} (a = {constants.a:.12g})")
    print(f"gamma^2 = {constants.gamma2:.12g}")
    for label, value in table.items():
        print(f"casimir {label} = {value:.12g}")
    if run.report.calibration_path is not None:
        document = build_calibration_document(
            calibration, settings, casimir=table, a_from_mass=derived_a
        )
        path = write_report_document(document, run.report.calibration_path)
        logger.info('EVENT=CALIBRATION_WRITTEN FILE="%s"', path)
    return EXIT_SUCCESS


def _trace_source(run: RunConfig) -> tuple[Any, tuple[np.ndarray, ...]]:
    constants = run.settings.constants
    momenta = tuple(
        on_shell_momentum(wave.momentum, constants.m, constants.c) for wave in run.trace.waves
    )
    weights = [wave.weight for wave in run.trace.waves]
    label = run.trace.label
    if label == (0, 0):
        return plane_wave_psi(momenta, weights, constants), momenta

    parts = []
    for p, weight in zip(momenta, weights):
        amplitude = np.zeros((label[0] + 1) * (label[1] + 1), dtype=complex)
        amplitude[0] = weight
        parts.append(plane_wave_spinor_field(label, "undotted", p, amplitude, constants))

    def coefficients(x: Any) -> Any:
        total = parts[0](x)
        for part in parts[1:]:
            total = total + part(x)
        return total

    spinor = SpinorField(label, "undotted", coefficients)
    return mode_field(spinor), momenta


def _trace_starts(run: RunConfig) -> list[ConfigPoint]:
    starts = run.trace.starts
    if isinstance(starts, int):
        rng = rng_for(run.settings.seed, 8)
        return [random_config_point(rng) for _ in range(starts)]
    return [ConfigPoint.from_array(start) for start in starts]


def _slope_residual(
    trajectory: Trajectory, source: WaveField, p: np.ndarray, power: float
) -> float | None:
    """Deviation of x(sigma) from the straight line a single scalar plane wave predicts."""

    if len(trajectory) < 2:
        return None
    first = trajectory.samples[0].q.as_array()
    chi_squared = abs(complex(source(first))) ** (-2.0 / power)
    expected = trajectory.positions[0] + np.outer(trajectory.sigmas, chi_squared * p)
    scale = max(float(np.abs(expected).max()), 1.0)
    return float(np.abs(trajectory.positions - expected).max()) / scale


def cmd_trace(run: RunConfig, out_dir: Path) -> int:
    """Integrate the configured trajectories and export CSV files plus a summary."""

    settings = run.settings
    source, momenta = _trace_source(run)
    metric = config_metric(settings.constants, settings.sign)
    starts = _trace_starts(run)
    trajectories = integrate_bundle(
        starts,
        source,
        run.trace.span,
        run.trace.steps,
        settings.fields,
        settings.constants,
        metric,
        sign=settings.sign,
        workers=settings.workers,
        seed=settings.seed,
    )

    out_dir.mkdir(parents=True, exist_ok=True)
    files: list[Path] = []
    reports = []
    slopes: list[float | None] = []
    straight = run.trace.label == (0, 0) and len(momenta) == 1 and settings.fields.kind == "none"
    for index, trajectory in enumerate(trajectories):
        path = write_trajectory_csv(trajectory, out_dir / f"trajectory-{index:03d}.csv")
        files.append(path)
        logger.info('EVENT=TRAJECTORY_WRITTEN FILE="%s" SAMPLES=%d', path, len(trajectory))
        if len(trajectory) >= ZITTERBEWEGUNG_MIN_SAMPLES:
            report = zitterbewegung_report(
                trajectory,
                settings.constants,
                source=source,
                metric=metric,
                diagnostic_points=run.trace.diagnostic_points,
            )
            reports.append(report)
        else:
            reports.append(None)
        slope = None
        if straight:
            power = settings.constants.amplitude_power
            slope = _slope_residual(trajectory, source, momenta[0], power)
        slopes.append(slope)

    summary = build_trace_summary(files, trajectories, reports, slopes=slopes)
    summary_path = write_report_document(summary, out_dir / TRACE_SUMMARY_NAME)
    logger.info('EVENT=TRACE_SUMMARY_WRITTEN FILE="%s"', summary_path)
    return EXIT_SUCCESS


def _run_main(argv: Sequence[str] | None = None) -> int:
    """Execute the CLI and return an appropriate exit code."""

    args = parse_arguments(argv)
    if args.emit_template:
        sys.stdout.write(render_template())
        return EXIT_SUCCESS

    try:
        config = resolve_cli_config(args)
        run = run_config_from_mapping(config)
    except (ValueError, ConfigError) as exc:
        _print_error(str(exc))
        return EXIT_CONFIG_ERROR

    configure_logging(config)

    try:
        if args.command == "verify":
            return cmd_verify(run)
        if args.command == "calibrate":
            return cmd_calibrate(run)
        return cmd_trace(run, Path(args.out_dir).expanduser())
    except SpintopError as exc:
        _print_error(str(exc))
        return exc.exit_code


def _handle_unexpected_exception(exc: Exception) -> int:
    """Log *exc* when debugging and surface a friendly user message."""

    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("Unhandled exception encountered", exc_info=exc)

    _print_error("An unexpected error occurred. Run with --verbose for details.")
    return EXIT_UNEXPECTED_ERROR


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the console script."""

    try:
        return _run_main(argv)
    except SystemExit:
        raise
    except KeyboardInterrupt:
        _print_error("Operation cancelled by user.")
        return EXIT_UNEXPECTED_ERROR
    except Exception as exc:  # pragma: no cover
        return _handle_unexpected_exception(exc)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
