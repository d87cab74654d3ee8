"""Utilities for exporting verification results and trajectories to files."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import TYPE_CHECKING, Any, Mapping, Sequence

import numpy as np

from .dynamics import CSV_COLUMNS

if TYPE_CHECKING:  # pragma: no cover - used for type checking only
    from .constants import PhysicalConstants
    from .dynamics import Trajectory, ZitterbewegungReport
    from .spin import CalibrationReport
    from .suites import SuiteRun, SuiteSettings

__all__ = [
    "REPORT_SCHEMA_VERSION",
    "build_report_document",
    "build_calibration_document",
    "build_trace_summary",
    "write_report_document",
    "write_trajectory_csv",
]

REPORT_SCHEMA_VERSION = 1


def _plain(value: Any) -> Any:
    """Convert numpy scalars, arrays and tuples into JSON-ready values."""

    if isinstance(value, Mapping):
        return {str(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_plain(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if not math.isfinite(number):
            return repr(number)
        return number
    if isinstance(value, complex):
        return {"real": _plain(value.real), "imag": _plain(value.imag)}
    return value


def _constants_document(constants: "PhysicalConstants") -> dict[str, object]:
    return {
        "hbar": constants.hbar,
        "c": constants.c,
        "m": constants.m,
        "e": constants.e,
        "a": constants.a,
        "gamma2": constants.gamma2,
        "n": constants.n,
        "lift_power": constants.lift_power,
    }


def _settings_document(settings: "SuiteSettings") -> dict[str, object]:
    return {
        "seed": settings.seed,
        "sign": settings.sign,
        "fields": settings.fields.kind,
        "constants": _constants_document(settings.constants),
        "tolerances": dict(sorted(settings.tolerances.items())),
        "samples": dict(sorted(settings.counts.items())),
        "madelung_negative": {
            "enabled": settings.negative_enabled,
            "gamma2": settings.negative_gamma2,
        },
    }


def build_report_document(
    run: "SuiteRun",
    settings: "SuiteSettings",
    *,
    timings: bool = False,
    version: str | None = None,
) -> dict[str, object]:
    """Return the verification report; identical inputs give identical documents.

    ``wall_time_ms`` appears on each check only when *timings* is true.
    """

    suites: list[dict[str, object]] = []
    total = failed = 0
    for outcome in run.outcomes:
        checks: list[dict[str, object]] = []
        for check in outcome.checks:
            entry: dict[str, object] = {
                "name": check.name,
                "pass": check.passed,
                "max_residual": check.max_residual,
                "tolerance": check.tolerance,
                "samples": check.samples,
            }
            if timings:
                entry["wall_time_ms"] = check.wall_time_ms
            checks.append(entry)
            total += 1
            failed += 0 if check.passed else 1
        suites.append(
            {
                "name": outcome.name,
                "pass": outcome.passed,
                "checks": checks,
                "notes": dict(sorted(outcome.notes.items())),
            }
        )

    document: dict[str, object] = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "tool": {"name": "spintop", "version": version},
        "settings": _settings_document(settings),
        "suites": suites,
        "summary": {
            "checks": total,
            "failed": failed,
            "status": "pass" if failed == 0 else "fail",
        },
    }
    return _plain(document)


def build_calibration_document(
    calibration: "CalibrationReport",
    settings: "SuiteSettings",
    *,
    casimir: Mapping[str, float] | None = None,
    a_from_mass: float | None = None,
) -> dict[str, object]:
    document: dict[str, object] = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "settings": _settings_document(settings),
        "calibration": calibration.as_dict(),
    }
    if a_from_mass is not None:
        constants = settings.constants
        document["length_scale"] = {
            "a": constants.a,
            "a_from_mass": a_from_mass,
            "m": constants.m,
            "gamma2": constants.gamma2,
        }
    if casimir is not None:
        document["casimir"] = dict(casimir)
    return _plain(document)


def build_trace_summary(
    files: Sequence[Path],
    trajectories: Sequence["Trajectory"],
    reports: Sequence["ZitterbewegungReport | None"],
    *,
    slopes: Sequence[float | None] = (),
) -> dict[str, object]:
    """Per-trajectory summary next to the CSV files written by ``spintop trace``."""

    entries: list[dict[str, object]] = []
    for index, (path, trajectory) in enumerate(zip(files, trajectories)):
        report = reports[index] if index < len(reports) else None
        entry: dict[str, object] = {
            "file": path.name,
            "samples": len(trajectory),
            "step": trajectory.step,
            "truncated": trajectory.truncated,
            "zitterbewegung": None if report is None else report.as_dict(),
        }
        if index < len(slopes) and slopes[index] is not None:
            entry["slope_residual"] = slopes[index]
        entries.append(entry)
    return _plain({"schema_version": REPORT_SCHEMA_VERSION, "trajectories": entries})


def write_report_document(document: Mapping[str, object], path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=2, ensure_ascii=False)
        handle.write("\n")
    return path


def write_trajectory_csv(trajectory: "Trajectory", path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for state in trajectory.samples:
            writer.writerow([repr(float(value)) for value in state.as_row()])
    return path
