from __future__ import annotations

import math

import pytest

from spintop.core.constants import (
    DEFAULT_CONSTANTS,
    PhysicalConstants,
    a_from_mass,
    conformal_gamma2,
    constants_from_config,
)
from spintop.core.errors import ConfigError, NonpositiveMass


def test_conformal_coupling_in_ten_dimensions() -> None:
    assert conformal_gamma2(10) == pytest.approx(2.0 / 9.0)
    assert conformal_gamma2(4) == pytest.approx(1.0 / 6.0)


def test_length_scale_from_mass() -> None:
    expected = math.sqrt(1.5 * (1.0 + 4.0 * 2.0 / 9.0))

    assert a_from_mass(1.0) == pytest.approx(expected)
    assert a_from_mass(2.0, hbar=3.0) == pytest.approx(1.5 * expected)
    assert DEFAULT_CONSTANTS.a == pytest.approx(expected)


@pytest.mark.parametrize("mass", [0.0, -1.0, math.inf, math.nan])
def test_length_scale_rejects_bad_mass(mass: float) -> None:
    with pytest.raises(NonpositiveMass):
        a_from_mass(mass)


def test_derived_quantities() -> None:
    constants = PhysicalConstants(a=2.0, e=0.5, lift_power=1)

    assert constants.amplitude_power == pytest.approx(4.0)
    assert constants.lift_length == pytest.approx(2.0)
    assert constants.coupling == pytest.approx(0.5)
    assert PhysicalConstants(a=2.0, e=0.5).coupling == pytest.approx(1.0)
    assert constants.with_gamma2(0.25).gamma2 == 0.25
    assert constants.with_a(3.0).a == 3.0


def test_constants_validate_fields() -> None:
    with pytest.raises(ValueError, match="positive"):
        PhysicalConstants(a=-1.0)
    with pytest.raises(ValueError, match="lift_power"):
        PhysicalConstants(lift_power=3)


def test_constants_from_config_defaults() -> None:
    assert constants_from_config({}) == DEFAULT_CONSTANTS
    assert constants_from_config({"constants": {}}).a == pytest.approx(DEFAULT_CONSTANTS.a)


def test_constants_from_config_pins_a() -> None:
    constants = constants_from_config({"constants": {"a": 1.5, "derive_a_from_mass": False}})

    assert constants.a == 1.5


@pytest.mark.parametrize(
    ("section", "match"),
    [
        ({"a": 1.5, "derive_a_from_mass": True}, "Exactly one"),
        ({"a": None, "derive_a_from_mass": False}, "Exactly one"),
        ({"n": 2}, "constants.n"),
        ({"lift_power": 3}, "lift_power"),
        ({"e": "big"}, "constants.e"),
        ({"m": 0.0}, "Mass must be positive"),
    ],
)
def test_constants_from_config_errors(section: dict, match: str) -> None:
    with pytest.raises(ConfigError, match=match):
        constants_from_config({"constants": section})


def test_gamma2_override_is_logged(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level("WARNING", logger="spintop.core.constants"):
        constants = constants_from_config({"constants": {"gamma2": 0.25}})

    assert constants.gamma2 == 0.25
    assert "EVENT=GAMMA2_OVERRIDE" in caplog.text
