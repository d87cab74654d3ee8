from __future__ import annotations

import numpy as np
import pytest

from spintop.core import jets
from spintop.core.constants import PhysicalConstants
from spintop.core.samples import (
    BOOST_RANGE,
    ROTATION_RANGE,
    flat_metric,
    plane_wave_psi,
    random_angles,
    random_chi,
    random_config_point,
    random_gauge,
    random_pair,
    random_polynomial,
    rng_for,
)


def test_rng_streams_are_reproducible_and_independent() -> None:
    first = rng_for(42, 1).normal(size=5)
    again = rng_for(42, 1).normal(size=5)
    other = rng_for(42, 2).normal(size=5)

    np.testing.assert_array_equal(first, again)
    assert not np.allclose(first, other)


def test_random_angles_stay_in_sampling_box() -> None:
    rng = rng_for(1)
    angles = np.array([random_angles(rng) for _ in range(200)])

    assert angles.shape == (200, 6)
    assert np.abs(angles[:, :3]).max() <= ROTATION_RANGE
    assert np.abs(angles[:, 3:]).max() <= BOOST_RANGE


def test_random_config_point_layout() -> None:
    point = random_config_point(rng_for(3))

    assert len(point.x) == 4
    assert len(point.theta) == 6
    assert max(abs(v) for v in point.x) <= 1.0


def test_weyl_factor_and_gauge_stay_positive_on_sampling_box() -> None:
    rng = rng_for(8)
    for _ in range(20):
        chi = random_chi(rng)
        rho = random_gauge(rng)
        q = random_config_point(rng).as_array()

        assert float(chi(q)) > 0.0
        assert float(rho(q)) > 0.0


def test_polynomial_field_is_jet_compatible() -> None:
    field = random_polynomial(rng_for(2), dim=3, sine_amplitude=0.2)
    point = np.array([0.1, -0.4, 0.3])

    value = field(jets.seed(point))

    assert isinstance(value, jets.Jet)
    assert jets.value(value) == pytest.approx(float(field(point)))


def test_random_pair_has_positive_weyl_factor() -> None:
    pair = random_pair(rng_for(6))
    q = random_config_point(rng_for(6, 1)).as_array()

    assert float(pair.chi(q)) > 0.0


def test_flat_metric_defaults_to_minkowski() -> None:
    metric = flat_metric()

    np.testing.assert_array_equal(metric(np.zeros(4)), np.diag([-1.0, 1.0, 1.0, 1.0]))
    assert metric.constant_curvature == 0.0


def test_plane_wave_superposition_at_origin() -> None:
    momenta = [[1.0, 0.0, 0.0, 0.0], [1.2, 0.3, 0.0, 0.0]]
    psi = plane_wave_psi(momenta, [1.0, 0.5], PhysicalConstants())

    assert complex(psi(np.zeros(10))) == pytest.approx(1.5)
    assert "x2" in psi.name
