from __future__ import annotations

import re
from pathlib import Path

import pytest
import yaml

from spintop import config
from spintop.core.errors import ConfigError
from spintop.core.suites import SUITE_NAMES


def _write(tmp_path: Path, content: str) -> Path:
    config_file = tmp_path / "spintop.yaml"
    config_file.write_text(content, encoding="utf-8")
    return config_file


def test_load_config_returns_defaults_when_file_missing(tmp_path: Path) -> None:
    loaded = config.load_config(tmp_path / "missing.yaml")

    assert loaded == config.DEFAULT_CONFIG


def test_load_config_treats_empty_file_as_defaults(tmp_path: Path) -> None:
    assert config.load_config(_write(tmp_path, "\n")) == config.DEFAULT_CONFIG
    assert config.load_config(_write(tmp_path, "# only a comment\n")) == config.DEFAULT_CONFIG


def test_load_config_overrides_defaults(tmp_path: Path) -> None:
    config_file = _write(tmp_path, "seed: 7\nconstants:\n  e: 0.5\n")

    loaded = config.load_config(config_file)

    assert loaded["seed"] == 7
    assert loaded["constants"]["e"] == 0.5
    assert loaded["constants"]["m"] == config.DEFAULT_CONFIG["constants"]["m"]


def test_load_config_respects_logging_file(tmp_path: Path) -> None:
    config_file = _write(tmp_path, "logging:\n  level: DEBUG\n  file: /var/log/spintop.log\n")

    loaded = config.load_config(config_file)

    assert loaded["logging"] == {"level": "DEBUG", "file": "/var/log/spintop.log"}


def test_load_config_rejects_non_mapping(tmp_path: Path) -> None:
    with pytest.raises(ValueError, match="mapping"):
        config.load_config(_write(tmp_path, "[]"))


def test_load_config_rejects_invalid_yaml(tmp_path: Path) -> None:
    with pytest.raises(ValueError, match="not valid YAML"):
        config.load_config(_write(tmp_path, "seed: [1, 2\n"))


@pytest.mark.parametrize(
    ("content", "field"),
    [
        ("seed: abc\n", "seed"),
        ("seed: true\n", "seed"),
        ("constants: 3\n", "constants"),
        ("constants:\n  e: fast\n", "constants.e"),
        ("geometry:\n  sign: 2\n", "geometry.sign"),
        ("geometry:\n  fd_step: 0\n", "geometry.fd_step"),
        ("workers: 0\n", "workers"),
        ("fields:\n  kind: dipole\n", "fields.kind"),
        ("fields:\n  E: [1, 2]\n", "fields.E"),
        ("tolerances:\n  algebra: -1\n", "tolerances.algebra"),
        ("samples:\n  lorentz: 0\n", "samples.lorentz"),
        ("suites: [spinors]\n", "suites"),
        ("suites: []\n", "suites"),
        ("trace:\n  waves: []\n", "trace.waves"),
        ("trace:\n  waves: [{momentum: [1, 2]}]\n", "trace.waves[0].momentum"),
        ("trace:\n  label: [0, 4]\n", "trace.label"),
        ("trace:\n  starts: 0\n", "trace.starts"),
        ("trace:\n  starts: [[0, 0]]\n", "trace.starts[0]"),
        ("trace:\n  span: 0\n", "trace.span"),
        ("trace:\n  steps: -1\n", "trace.steps"),
        ("trace:\n  diagnostic_points: -1\n", "trace.diagnostic_points"),
        ("report:\n  timings: 1\n", "report.timings"),
    ],
)
def test_load_config_reports_invalid_field(tmp_path: Path, content: str, field: str) -> None:
    with pytest.raises(ValueError, match=re.escape(f"Configuration field '{field}'")):
        config.load_config(_write(tmp_path, content))


def test_per_check_tolerance_keys_are_kept(tmp_path: Path) -> None:
    config_file = _write(tmp_path, "tolerances:\n  lorentz.sl2c_vector_map: 1.0e-9\n")

    run = config.run_config_from_mapping(config.load_config(config_file))

    assert run.settings.tolerance("lorentz.sl2c_vector_map", "algebra") == 1e-9
    assert run.settings.tolerance("lorentz.metric_preservation", "algebra") == 1e-12


def test_run_config_from_defaults() -> None:
    run = config.run_config_from_mapping(config.load_config(Path("/nonexistent/spintop.yaml")))

    assert run.suites == SUITE_NAMES
    assert run.settings.seed == config.DEFAULT_CONFIG["seed"]
    assert run.settings.sign == 1
    assert run.settings.fd_step == 1e-4
    assert run.settings.fields.kind == "none"
    assert run.settings.negative_enabled is True
    assert run.trace.label == (0, 0)
    assert len(run.trace.waves) == 2
    assert run.trace.starts[0].shape == (10,)
    assert run.trace.diagnostic_points == 8
    assert run.report.path == Path("spintop-report.json")
    assert run.report.calibration_path == Path("spintop-calibration.json")


def test_run_config_with_random_starts_and_no_calibration(tmp_path: Path) -> None:
    config_file = _write(
        tmp_path, "trace:\n  starts: 3\nreport:\n  calibration_path: null\n"
    )

    run = config.run_config_from_mapping(config.load_config(config_file))

    assert run.trace.starts == 3
    assert run.report.calibration_path is None


def test_run_config_pins_length_scale(tmp_path: Path) -> None:
    config_file = _write(tmp_path, "constants:\n  a: 2.5\n  derive_a_from_mass: false\n")

    run = config.run_config_from_mapping(config.load_config(config_file))

    assert run.settings.constants.a == 2.5


def test_run_config_wraps_constant_errors(tmp_path: Path) -> None:
    config_file = _write(tmp_path, "constants:\n  m: 0\n")

    with pytest.raises(ConfigError):
        config.run_config_from_mapping(config.load_config(config_file))


def test_render_template_round_trips_to_defaults() -> None:
    rendered = config.render_template()

    assert rendered.startswith("# spintop configuration")
    assert "# Seed for every random sample" in rendered
    assert yaml.safe_load(rendered) == config.DEFAULT_CONFIG
