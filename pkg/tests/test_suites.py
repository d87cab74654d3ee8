from __future__ import annotations

import math

import pytest

from spintop.core.constants import PhysicalConstants
from spintop.core.suites import (
    DEFAULT_SAMPLE_COUNTS,
    DEFAULT_TOLERANCES,
    SUITE_NAMES,
    SUITES,
    CheckResult,
    SuiteSettings,
    run_suite,
    run_suites,
)

SMALL_COUNTS = {
    "lorentz": 5,
    "curvature": 2,
    "weyl": 2,
    "madelung": 3,
    "reduction": 2,
    "trajectory_steps": 200,
}


def _settings(**overrides) -> SuiteSettings:
    values = {"constants": PhysicalConstants(), "seed": 42, "counts": dict(SMALL_COUNTS)}
    values.update(overrides)
    return SuiteSettings(**values)


def test_registry_covers_every_suite() -> None:
    assert tuple(SUITES) == SUITE_NAMES
    assert DEFAULT_TOLERANCES["algebra"] == 1e-12
    assert DEFAULT_SAMPLE_COUNTS["trajectory_steps"] == 1000


def test_check_result_passes_on_boundary() -> None:
    assert CheckResult.evaluate("x", 1e-8, 1e-8, 1, 0.0).passed
    assert not CheckResult.evaluate("x", 2e-8, 1e-8, 1, 0.0).passed
    assert not CheckResult.evaluate("x", math.nan, 1.0, 1, 0.0).passed


def test_check_result_logs_event(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level("INFO", logger="spintop.core.suites"):
        CheckResult.evaluate("lorentz.demo", 0.0, 1e-12, 4, 0.0)

    assert "EVENT=CHECK NAME=lorentz.demo STATUS=pass" in caplog.text


def test_tolerance_prefers_per_check_override() -> None:
    settings = _settings(tolerances={"algebra": 1e-9, "lorentz.sl2c_vector_map": 1e-3})

    assert settings.tolerance("lorentz.sl2c_vector_map", "algebra") == 1e-3
    assert settings.tolerance("lorentz.metric_preservation", "algebra") == 1e-9
    assert settings.tolerance("curvature.constant", "curvature") == 1e-8


def test_count_falls_back_to_default() -> None:
    settings = _settings(counts={"lorentz": 3})

    assert settings.count("lorentz") == 3
    assert settings.count("weyl") == DEFAULT_SAMPLE_COUNTS["weyl"]


def test_unknown_suite_is_rejected() -> None:
    with pytest.raises(ValueError, match="unknown suite 'spinors'"):
        run_suite("spinors", _settings())
    with pytest.raises(ValueError, match="choose from"):
        run_suites(_settings(), ["lorentz", "spinors"])


def test_lorentz_suite_passes() -> None:
    outcome = run_suite("lorentz", _settings())

    assert outcome.passed
    assert [check.name for check in outcome.checks] == [
        "lorentz.metric_preservation",
        "lorentz.sl2c_vector_map",
        "lorentz.conjugate_rep",
        "lorentz.symmetric_power_oracle",
        "lorentz.rep_homomorphism",
        "lorentz.bi_invariance",
    ]
    assert outcome.checks[0].samples == 5
    assert outcome.checks[-1].samples == 5


def test_tightened_tolerance_fails_check() -> None:
    settings = _settings(tolerances={"lorentz.symmetric_power_oracle": -1.0})

    outcome = run_suite("lorentz", settings)

    assert not outcome.passed
    failed = [check.name for check in outcome.checks if not check.passed]
    assert failed == ["lorentz.symmetric_power_oracle"]


def test_curvature_suite_records_printed_comparison() -> None:
    outcome = run_suite("curvature", _settings())
    notes = outcome.notes

    assert outcome.passed
    assert notes["curvature_times_a2"] == pytest.approx(3.0, rel=1e-8)
    assert notes["printed_curvature_times_a2"] == 6.0
    assert notes["ratio_to_printed"] == pytest.approx(0.5, rel=1e-8)


def test_dirac_suite_passes_and_reports_length_scale() -> None:
    outcome = run_suite("dirac", _settings())

    assert outcome.passed
    assert outcome.notes["a_times_mc_over_hbar"] == pytest.approx(
        math.sqrt(1.5 * (1.0 + 4.0 * PhysicalConstants().gamma2))
    )


def test_madelung_negative_check_can_be_disabled() -> None:
    outcome = run_suite("madelung", _settings(negative_enabled=False))

    assert [check.name for check in outcome.checks] == ["madelung.identity"]
    assert outcome.notes == {}


def test_madelung_negative_check_reuses_identity_pairs() -> None:
    outcome = run_suite("madelung", _settings())

    identity, negative = outcome.checks
    assert negative.name == "madelung.negative_gamma2"
    assert identity.samples == 3
    assert negative.samples == 20
    assert outcome.notes["negative_gamma2"] == 0.25
    assert negative.passed
    assert outcome.notes["negative_max_residual"] > 1e-3


def test_run_suites_keeps_requested_order() -> None:
    run = run_suites(_settings(workers=2), ["dirac", "lorentz"])

    assert [outcome.name for outcome in run.outcomes] == ["dirac", "lorentz"]
    assert len(run.checks) == sum(len(outcome.checks) for outcome in run.outcomes)
    assert run.passed


def test_suites_are_deterministic_for_a_seed() -> None:
    first = run_suite("lorentz", _settings())
    second = run_suite("lorentz", _settings())

    assert [c.max_residual for c in first.checks] == [c.max_residual for c in second.checks]


@pytest.mark.slow
def test_all_suites_pass_with_default_settings() -> None:
    run = run_suites(_settings())

    failed = [check.name for check in run.checks if not check.passed]
    assert failed == []
    assert [outcome.name for outcome in run.outcomes] == list(SUITE_NAMES)


@pytest.mark.slow
def test_trajectory_suite_checks_zitterbewegung_amplitude() -> None:
    outcome = run_suite("trajectory-convergence", _settings())

    names = [check.name for check in outcome.checks]
    assert "trajectory.zitterbewegung_amplitude" in names
    assert outcome.passed
    zitterbewegung = outcome.notes["zitterbewegung"]
    assert zitterbewegung["amplitude"] > 10.0 * outcome.notes["noise_floor"]
    assert len(zitterbewegung["volume_series"]) == 4


@pytest.mark.slow
def test_flipped_sign_changes_curvature_but_passes() -> None:
    outcome = run_suite("curvature", _settings(sign=-1))

    assert outcome.passed
    assert outcome.notes["curvature_times_a2"] == pytest.approx(-3.0, rel=1e-8)
