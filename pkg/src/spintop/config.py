"""Configuration loading utilities for spintop."""

from __future__ import annotations

import math
from collections.abc import Mapping
from copy import deepcopy
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .core.constants import constants_from_config
from .core.fields import FIELD_KINDS, fields_from_config
from .core.suites import DEFAULT_SAMPLE_COUNTS, DEFAULT_TOLERANCES, SUITE_NAMES, SuiteSettings

CONFIG_PATH = Path("spintop.yaml")
DEFAULT_CONFIG: dict[str, Any] = {
    "seed": 20240601,
    "workers": 1,
    "constants": {
        "hbar": 1.0,
        "c": 1.0,
        "m": 1.0,
        "e": 0.3,
        "a": None,
        "derive_a_from_mass": True,
        "gamma2": None,
        "n": 10,
        "lift_power": 2,
    },
    "geometry": {
        "sign": 1,
        "fd_step": 1e-4,
    },
    "fields": {
        "kind": "none",
        "E": [0.0, 0.0, 0.0],
        "H": [0.0, 0.0, 0.0],
        "amplitude": 0.0,
        "wave_vector": [0.0, 0.0, 1.0],
        "polarization": [1.0, 0.0, 0.0],
    },
    "tolerances": dict(DEFAULT_TOLERANCES),
    "samples": dict(DEFAULT_SAMPLE_COUNTS),
    "suites": list(SUITE_NAMES),
    "madelung_negative": {
        "enabled": True,
        "gamma2": 0.25,
    },
    "trace": {
        "waves": [
            {"momentum": [0.0, 0.0, 0.0], "weight": 1.0},
            {"momentum": [0.5, 0.0, 0.0], "weight": 0.5},
        ],
        "label": [0, 0],
        "starts": [[0.0] * 10],
        "span": 80.0,
        "steps": 1000,
        "diagnostic_points": 8,
    },
    "report": {
        "path": "spintop-report.json",
        "timings": False,
        "calibration_path": "spintop-calibration.json",
    },
    "logging": {
        "level": "INFO",
        "file": None,
    },
}

_NUMBER = (int, float)

CONFIG_SCHEMA: dict[str, Any] = {
    "seed": int,
    "workers": int,
    "constants": {
        "hbar": _NUMBER,
        "c": _NUMBER,
        "m": _NUMBER,
        "e": _NUMBER,
        "a": (int, float, type(None)),
        "derive_a_from_mass": bool,
        "gamma2": (int, float, type(None)),
        "n": int,
        "lift_power": int,
    },
    "geometry": {
        "sign": int,
        "fd_step": _NUMBER,
    },
    "fields": {
        "kind": str,
        "E": list,
        "H": list,
        "amplitude": _NUMBER,
        "wave_vector": list,
        "polarization": list,
    },
    "tolerances": {key: _NUMBER for key in DEFAULT_TOLERANCES},
    "samples": {key: int for key in DEFAULT_SAMPLE_COUNTS},
    "suites": list,
    "madelung_negative": {
        "enabled": bool,
        "gamma2": _NUMBER,
    },
    "trace": {
        "waves": list,
        "label": list,
        "starts": (list, int),
        "span": _NUMBER,
        "steps": int,
        "diagnostic_points": int,
    },
    "report": {
        "path": str,
        "timings": bool,
        "calibration_path": (str, type(None)),
    },
    "logging": {
        "level": (str, int),
        "file": (str, type(None)),
    },
}

_SECTION_COMMENTS: dict[str, str] = {
    "seed": "Seed for every random sample; identical seeds give identical reports.",
    "workers": "Threads used to run suites and trajectory bundles.",
    "constants": "Natural units by default. Set derive_a_from_mass to false to pin 'a'.",
    "geometry": "sign selects the group metric sign convention (+1 or -1).",
    "fields": "kind is one of: " + ", ".join(FIELD_KINDS) + ".",
    "tolerances": "Category tolerances; add '<suite>.<check>' keys to override single checks.",
    "samples": "Random points per suite and steps for trajectory checks.",
    "suites": "Suites run by 'spintop verify' when no --suite is given.",
    "madelung_negative": "Perturbed gamma^2 that must break the Madelung identity.",
    "trace": "Plane waves (3-momenta put on shell) and start points for 'spintop trace'.",
    "report": "Report destinations; timings adds wall_time_ms to every check.",
    "logging": "Log level and optional log file.",
}

__all__ = [
    "CONFIG_PATH",
    "DEFAULT_CONFIG",
    "CONFIG_SCHEMA",
    "TraceWave",
    "TraceConfig",
    "ReportConfig",
    "RunConfig",
    "load_config",
    "run_config_from_mapping",
    "render_template",
]


def _merge_config(base: Mapping[str, Any], overrides: Mapping[str, Any]) -> dict[str, Any]:
    """Return a deep-merged copy of *base* with values from *overrides*."""

    merged: dict[str, Any] = deepcopy(dict(base))
    for key, value in overrides.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = _merge_config(merged[key], value)
        else:
            merged[key] = value
    return merged


def _ensure_type(value: Any, expected: Any, path: str) -> None:
    if isinstance(expected, tuple):
        if isinstance(value, bool) and bool not in expected:
            raise ValueError(f"Configuration field '{path}' must not be a boolean")
        if not isinstance(value, expected):
            expected_names = ", ".join(sorted({t.__name__ for t in expected}))
            raise ValueError(
                f"Configuration field '{path}' must be one of the types: {expected_names}"
            )
        return

    if expected is bool:
        if not isinstance(value, bool):
            raise ValueError(f"Configuration field '{path}' must be a boolean")
        return

    if expected is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"Configuration field '{path}' must be an integer")
        return

    if expected is str:
        if not isinstance(value, str):
            raise ValueError(f"Configuration field '{path}' must be a string")
        return

    if expected is list:
        if not isinstance(value, list):
            raise ValueError(f"Configuration field '{path}' must be a list")
        return

    if isinstance(expected, Mapping):
        if not isinstance(value, Mapping):
            raise ValueError(f"Configuration field '{path}' must be a mapping")
        _validate_against_schema(value, expected, prefix=path)
        return

    raise TypeError(f"Unsupported schema type for '{path}': {expected!r}")


def _validate_against_schema(
    config: Mapping[str, Any], schema: Mapping[str, Any], *, prefix: str = ""
) -> None:
    for key, expected in schema.items():
        field_path = f"{prefix}.{key}" if prefix else key
        if key not in config:
            raise ValueError(f"Configuration field '{field_path}' is required")
        value = config[key]
        _ensure_type(value, expected, field_path)


def _number_list(value: Any, path: str, length: int) -> list[float]:
    if not isinstance(value, list) or len(value) != length:
        raise ValueError(f"Configuration field '{path}' must be a list of {length} numbers")
    for item in value:
        if isinstance(item, bool) or not isinstance(item, (int, float)) or not math.isfinite(item):
            raise ValueError(f"Configuration field '{path}' must be a list of {length} numbers")
    return [float(item) for item in value]


def _validate_values(config: Mapping[str, Any]) -> None:
    if config["geometry"]["sign"] not in (1, -1):
        raise ValueError("Configuration field 'geometry.sign' must be 1 or -1")
    if not config["geometry"]["fd_step"] > 0:
        raise ValueError("Configuration field 'geometry.fd_step' must be positive")
    if config["workers"] < 1:
        raise ValueError("Configuration field 'workers' must be at least 1")
    if config["fields"]["kind"] not in FIELD_KINDS:
        raise ValueError(
            f"Configuration field 'fields.kind' must be one of: {', '.join(FIELD_KINDS)}"
        )
    for key in ("E", "H", "wave_vector", "polarization"):
        _number_list(config["fields"][key], f"fields.{key}", 3)

    for key, value in config["tolerances"].items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) or not value > 0:
            raise ValueError(f"Configuration field 'tolerances.{key}' must be a positive number")
    for key, value in config["samples"].items():
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise ValueError(f"Configuration field 'samples.{key}' must be a positive integer")

    suites = config["suites"]
    unknown = [name for name in suites if name not in SUITE_NAMES]
    if not suites or unknown:
        raise ValueError(
            f"Configuration field 'suites' must list suites from: {', '.join(SUITE_NAMES)}"
        )

    trace = config["trace"]
    if not trace["waves"]:
        raise ValueError("Configuration field 'trace.waves' must list at least one wave")
    for index, wave in enumerate(trace["waves"]):
        path = f"trace.waves[{index}]"
        if not isinstance(wave, Mapping):
            raise ValueError(f"Configuration field '{path}' must be a mapping")
        _number_list(wave.get("momentum"), f"{path}.momentum", 3)
        weight = wave.get("weight", 1.0)
        if isinstance(weight, bool) or not isinstance(weight, (int, float)):
            raise ValueError(f"Configuration field '{path}.weight' must be a number")
    label = trace["label"]
    if len(label) != 2 or any(
        isinstance(item, bool) or not isinstance(item, int) or not 0 <= item <= 3 for item in label
    ):
        raise ValueError("Configuration field 'trace.label' must be two integers between 0 and 3")
    starts = trace["starts"]
    if isinstance(starts, int):
        if starts < 1:
            raise ValueError("Configuration field 'trace.starts' must be at least 1")
    else:
        if not starts:
            raise ValueError("Configuration field 'trace.starts' must list at least one point")
        for index, start in enumerate(starts):
            _number_list(start, f"trace.starts[{index}]", 10)
    if not trace["span"] > 0:
        raise ValueError("Configuration field 'trace.span' must be positive")
    if trace["steps"] < 0:
        raise ValueError("Configuration field 'trace.steps' must not be negative")
    if trace["diagnostic_points"] < 0:
        raise ValueError("Configuration field 'trace.diagnostic_points' must not be negative")


def _validate_config(config: Mapping[str, Any]) -> None:
    _validate_against_schema(config, CONFIG_SCHEMA)
    _validate_values(config)


def _validated_defaults() -> dict[str, Any]:
    defaults = deepcopy(DEFAULT_CONFIG)
    _validate_config(defaults)
    return defaults


def load_config(path: str | Path | None = None) -> dict[str, Any]:
    """Load the spintop configuration.

    Parameters
    ----------
    path:
        Optional path to the configuration file. When omitted, :data:`CONFIG_PATH` is used.

    Returns
    -------
    dict[str, Any]
        The configuration dictionary with defaults applied.

    Raises
    ------
    ValueError
        If the configuration file does not contain a mapping or a field is invalid.
    """

    config_path = Path(path).expanduser() if path else CONFIG_PATH

    if not config_path.exists():
        return _validated_defaults()

    raw_content = config_path.read_text(encoding="utf-8")
    if not raw_content.strip():
        return _validated_defaults()

    try:
        loaded = yaml.safe_load(raw_content)
    except yaml.YAMLError as exc:
        raise ValueError(f"Configuration file is not valid YAML: {exc}") from exc
    if loaded is None:
        return _validated_defaults()

    if not isinstance(loaded, Mapping):
        raise ValueError("Configuration file must define a mapping")

    merged = _merge_config(DEFAULT_CONFIG, loaded)
    _validate_config(merged)
    return merged


@dataclass(frozen=True, slots=True)
class TraceWave:
    momentum: tuple[float, float, float]
    weight: float


@dataclass(frozen=True)
class TraceConfig:
    waves: tuple[TraceWave, ...]
    label: tuple[int, int]
    starts: tuple[np.ndarray, ...] | int
    span: float
    steps: int
    diagnostic_points: int = 8


@dataclass(frozen=True, slots=True)
class ReportConfig:
    path: Path
    timings: bool
    calibration_path: Path | None


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters handed from the CLI to the suites and exporters."""

    settings: SuiteSettings
    suites: tuple[str, ...]
    trace: TraceConfig
    report: ReportConfig


def run_config_from_mapping(config: Mapping[str, Any]) -> RunConfig:
    """Build a :class:`RunConfig` from a validated configuration mapping.

    Constant and field errors surface as :class:`~spintop.core.errors.ConfigError`.
    """

    constants = constants_from_config(config)
    fields = fields_from_config(config)
    negative = config["madelung_negative"]
    settings = SuiteSettings(
        constants=constants,
        seed=int(config["seed"]),
        sign=int(config["geometry"]["sign"]),
        fields=fields,
        tolerances={key: float(value) for key, value in config["tolerances"].items()},
        counts={key: int(value) for key, value in config["samples"].items()},
        negative_enabled=bool(negative["enabled"]),
        negative_gamma2=float(negative["gamma2"]),
        workers=int(config["workers"]),
        fd_step=float(config["geometry"]["fd_step"]),
    )

    trace_section = config["trace"]
    waves = tuple(
        TraceWave(
            momentum=tuple(float(v) for v in wave["momentum"]),
            weight=float(wave.get("weight", 1.0)),
        )
        for wave in trace_section["waves"]
    )
    raw_starts = trace_section["starts"]
    starts: tuple[np.ndarray, ...] | int
    if isinstance(raw_starts, int):
        starts = raw_starts
    else:
        starts = tuple(np.asarray(start, dtype=float) for start in raw_starts)
    trace = TraceConfig(
        waves=waves,
        label=(int(trace_section["label"][0]), int(trace_section["label"][1])),
        starts=starts,
        span=float(trace_section["span"]),
        steps=int(trace_section["steps"]),
        diagnostic_points=int(trace_section["diagnostic_points"]),
    )

    report_section = config["report"]
    calibration = report_section["calibration_path"]
    report = ReportConfig(
        path=Path(report_section["path"]).expanduser(),
        timings=bool(report_section["timings"]),
        calibration_path=Path(calibration).expanduser() if calibration else None,
    )
    return RunConfig(
        settings=settings,
        suites=tuple(config["suites"]),
        trace=trace,
        report=report,
    )


def render_template() -> str:
    """Return the default configuration as commented YAML."""

    lines = ["# spintop configuration; every key shown with its default."]
    for key, value in DEFAULT_CONFIG.items():
        lines.append("")
        lines.append(f"# {_SECTION_COMMENTS[key]}")
        dumped = yaml.safe_dump({key: value}, sort_keys=False, default_flow_style=None)
        lines.append(dumped.rstrip())
    return "\n".join(lines) + "\n"
