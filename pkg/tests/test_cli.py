"""Tests for the spintop command-line interface."""

from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path

import pytest
import yaml

from spintop import __version__, cli
from spintop.core import DomainError
from spintop.core.suites import CheckResult, SuiteOutcome, SuiteRun


def _write_config(tmp_path: Path, content: dict[str, object]) -> Path:
    config_path = tmp_path / "spintop.yaml"
    config_path.write_text(yaml.safe_dump(content), encoding="utf-8")
    return config_path


def _fast_config(tmp_path: Path, **extra: object) -> Path:
    content: dict[str, object] = {
        "suites": ["lorentz"],
        "samples": {"lorentz": 3, "reduction": 2},
        "report": {
            "path": str(tmp_path / "report.json"),
            "calibration_path": str(tmp_path / "calibration.json"),
        },
    }
    content.update(extra)
    return _write_config(tmp_path, content)


def _failing_run(*_args: object) -> SuiteRun:
    check = CheckResult("lorentz.metric_preservation", 1.0, 1e-12, 1, False)
    return SuiteRun(outcomes=(SuiteOutcome("lorentz", (check,)),))


def test_parse_arguments_supports_expected_flags(tmp_path: Path) -> None:
    args = cli.parse_arguments(
        [
            "verify",
            "--config",
            str(tmp_path / "c.yaml"),
            "--verbose",
            "--suite",
            "lorentz",
            "--suite",
            "dirac",
            "--seed",
            "5",
            "--report",
            "out.json",
        ]
    )

    assert args.command == "verify"
    assert args.suites == ["lorentz", "dirac"]
    assert args.seed == 5
    assert args.report_path == "out.json"
    assert args.verbose is True


def test_parse_arguments_requires_command(capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as excinfo:
        cli.parse_arguments([])

    assert excinfo.value.code == 2
    assert "a command is required" in capsys.readouterr().err


def test_parse_arguments_rejects_unknown_suite() -> None:
    with pytest.raises(SystemExit):
        cli.parse_arguments(["verify", "--suite", "spinors"])


def test_version_flag(capsys: pytest.CaptureFixture[str]) -> None:
    with pytest.raises(SystemExit) as excinfo:
        cli.main(["--version"])

    assert excinfo.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_emit_template_prints_default_configuration(capsys: pytest.CaptureFixture[str]) -> None:
    exit_code = cli.main(["--emit-template"])
    output = capsys.readouterr().out

    assert exit_code == cli.EXIT_SUCCESS
    assert yaml.safe_load(output)["seed"] == 20240601


def test_resolve_cli_config_applies_overrides(tmp_path: Path) -> None:
    config_path = _fast_config(tmp_path)
    args = cli.parse_arguments(
        [
            "verify",
            "--config",
            str(config_path),
            "--suite",
            "dirac",
            "--suite",
            "dirac",
            "--seed",
            "11",
            "--log-file",
            str(tmp_path / "spintop.log"),
        ]
    )

    config = cli.resolve_cli_config(args)

    assert config["suites"] == ["dirac"]
    assert config["seed"] == 11
    assert config["logging"]["file"] == str(tmp_path / "spintop.log")
    assert config["samples"]["lorentz"] == 3


def test_resolve_cli_config_overrides_logging_with_verbose(tmp_path: Path) -> None:
    args = cli.parse_arguments(["calibrate", "--config", str(_fast_config(tmp_path)), "--verbose"])

    assert cli.resolve_cli_config(args)["logging"]["level"] == "DEBUG"


def test_configure_logging_writes_to_file(tmp_path: Path) -> None:
    log_path = tmp_path / "logs" / "spintop.log"

    cli.configure_logging({"logging": {"level": "INFO", "file": str(log_path)}})
    logging.getLogger("spintop.test").info("EVENT=TEST_MESSAGE")
    for handler in logging.getLogger().handlers:
        handler.flush()

    assert "EVENT=TEST_MESSAGE" in log_path.read_text(encoding="utf-8")


def test_configure_logging_defaults_to_info() -> None:
    cli.configure_logging({"logging": {"level": "LOUD"}})

    assert logging.getLogger().level == logging.INFO


def test_main_configures_debug_logging_with_verbose(tmp_path: Path) -> None:
    exit_code = cli.main(["verify", "--config", str(_fast_config(tmp_path)), "--verbose"])

    assert exit_code == cli.EXIT_SUCCESS
    assert logging.getLogger().level == logging.DEBUG


def test_verify_writes_report(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    exit_code = cli.main(["verify", "--config", str(_fast_config(tmp_path))])
    captured = capsys.readouterr()

    assert exit_code == cli.EXIT_SUCCESS
    assert "lorentz: pass" in captured.out
    document = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert document["summary"]["status"] == "pass"
    assert document["tool"]["version"] == __version__
    assert [suite["name"] for suite in document["suites"]] == ["lorentz"]


def test_verify_report_flag_overrides_path(tmp_path: Path) -> None:
    target = tmp_path / "elsewhere" / "out.json"

    exit_code = cli.main(
        ["verify", "--config", str(_fast_config(tmp_path)), "--report", str(target)]
    )

    assert exit_code == cli.EXIT_SUCCESS
    assert target.exists()
    assert not (tmp_path / "report.json").exists()


def test_verify_same_seed_gives_identical_reports(tmp_path: Path) -> None:
    config_path = str(_fast_config(tmp_path))
    first, second = tmp_path / "first.json", tmp_path / "second.json"

    cli.main(["verify", "--config", config_path, "--seed", "3", "--report", str(first)])
    cli.main(["verify", "--config", config_path, "--seed", "3", "--report", str(second)])

    assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")


def test_verify_returns_failure_exit_code(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    monkeypatch.setattr(cli, "run_suites", _failing_run)

    exit_code = cli.main(["verify", "--config", str(_fast_config(tmp_path))])
    captured = capsys.readouterr()

    assert exit_code == cli.EXIT_CHECK_FAILED
    assert "lorentz: FAIL" in captured.out
    assert "Error: 1 check(s) failed: lorentz.metric_preservation" in captured.err
    document = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert document["summary"] == {"checks": 1, "failed": 1, "status": "fail"}


def test_invalid_configuration_exits_with_config_error(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    config_path = _write_config(tmp_path, {"geometry": {"sign": 3}})

    exit_code = cli.main(["verify", "--config", str(config_path)])

    assert exit_code == cli.EXIT_CONFIG_ERROR
    assert "Error: Configuration field 'geometry.sign'" in capsys.readouterr().err


def test_invalid_constants_exit_with_config_error(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    config_path = _write_config(tmp_path, {"constants": {"m": -1.0}})

    exit_code = cli.main(["calibrate", "--config", str(config_path)])

    assert exit_code == cli.EXIT_CONFIG_ERROR
    assert "Mass must be positive" in capsys.readouterr().err


def test_domain_errors_are_reported(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    def explode(*_args: object) -> SuiteRun:
        raise DomainError("coordinates left the chart")

    monkeypatch.setattr(cli, "run_suites", explode)

    exit_code = cli.main(["verify", "--config", str(_fast_config(tmp_path))])

    assert exit_code == 1
    assert "Error: coordinates left the chart" in capsys.readouterr().err


def test_main_hides_traceback_for_unexpected_errors(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    def explode(*_args: object) -> SuiteRun:
        raise KeyError("boom")

    monkeypatch.setattr(cli, "run_suites", explode)

    exit_code = cli.main(["verify", "--config", str(_fast_config(tmp_path))])
    captured = capsys.readouterr()

    assert exit_code == cli.EXIT_UNEXPECTED_ERROR
    assert "An unexpected error occurred" in captured.err
    assert "Traceback" not in captured.err


def test_calibrate_prints_and_writes_document(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    exit_code = cli.main(["calibrate", "--config", str(_fast_config(tmp_path))])
    output = capsys.readouterr().out

    assert exit_code == cli.EXIT_SUCCESS
    lines = dict(line.split(" = ", 1) for line in output.splitlines())
    assert float(lines["R*a^2"].split()[0]) == pytest.approx(3.0, rel=1e-8)
    assert lines["R*a^2"].endswith("(printed 6)")
    assert float(lines["c_casimir"].split()[0]) == pytest.approx(0.5, rel=1e-8)
    assert lines["c_casimir"].endswith("(printed 1)")
    expected_a = math.sqrt(1.5 * (1.0 + 4.0 * 2.0 / 9.0))
    assert float(lines["a_from_mass"].split()[0]) == pytest.approx(expected_a, rel=1e-10)
    assert float(lines["gamma^2"]) == pytest.approx(2.0 / 9.0)
    assert float(lines["casimir (0,1/2)"]) == pytest.approx(1.5)
    assert float(lines["casimir (1,1)"]) == pytest.approx(8.0)
    document = json.loads((tmp_path / "calibration.json").read_text(encoding="utf-8"))
    assert document["calibration"]["points"] == 2
    assert document["calibration"]["c_casimir"] == pytest.approx(0.5, rel=1e-8)
    assert len(document["casimir"]) == 16
    assert document["casimir"]["(0,1/2)"] == pytest.approx(1.5)
    length_scale = document["length_scale"]
    assert length_scale["a_from_mass"] == pytest.approx(expected_a, rel=1e-10)
    assert length_scale["a"] == pytest.approx(length_scale["a_from_mass"])
    assert length_scale["gamma2"] == pytest.approx(2.0 / 9.0)


def test_trace_single_plane_wave_writes_csv_and_summary(tmp_path: Path) -> None:
    config_path = _fast_config(
        tmp_path,
        trace={
            "waves": [{"momentum": [0.3, 0.0, -0.1], "weight": 1.0}],
            "starts": [[0.0] * 10, [0.1] * 10],
            "span": 1.0,
            "steps": 120,
        },
    )
    out_dir = tmp_path / "trace"

    exit_code = cli.main(["trace", "--config", str(config_path), "--out", str(out_dir)])

    assert exit_code == cli.EXIT_SUCCESS
    with (out_dir / "trajectory-000.csv").open(encoding="utf-8", newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows[0][:3] == ["sigma", "tau", "x0"]
    assert len(rows) == 122
    summary = json.loads((out_dir / cli.TRACE_SUMMARY_NAME).read_text(encoding="utf-8"))
    entries = summary["trajectories"]
    assert [entry["file"] for entry in entries] == ["trajectory-000.csv", "trajectory-001.csv"]
    assert entries[0]["slope_residual"] < 1e-8
    assert entries[0]["zitterbewegung"]["samples"] == 121
    volume = entries[0]["zitterbewegung"]["volume_series"]
    assert len(volume) == 8
    assert all(math.isfinite(value) for value in volume)


def test_trace_spinor_label_and_random_starts(tmp_path: Path) -> None:
    config_path = _fast_config(
        tmp_path,
        trace={"label": [0, 1], "starts": 2, "span": 0.5, "steps": 10},
    )
    out_dir = tmp_path / "trace"

    exit_code = cli.main(["trace", "--config", str(config_path), "--out", str(out_dir)])

    assert exit_code == cli.EXIT_SUCCESS
    summary = json.loads((out_dir / cli.TRACE_SUMMARY_NAME).read_text(encoding="utf-8"))
    assert len(summary["trajectories"]) == 2
    assert all(entry["zitterbewegung"] is None for entry in summary["trajectories"])
    assert all("slope_residual" not in entry for entry in summary["trajectories"])
