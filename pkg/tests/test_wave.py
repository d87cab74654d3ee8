from __future__ import annotations

import math

import numpy as np
import pytest

from spintop.core import jets
from spintop.core.constants import PhysicalConstants
from spintop.core.errors import NonpositiveWeylFactor, ZeroAmplitude
from spintop.core.fields import FieldConfig
from spintop.core.geometry import config_metric
from spintop.core.samples import plane_wave_psi, random_pair, rng_for
from spintop.core.spin import on_shell_momentum
from spintop.core.wave import (
    PotentialPair,
    chi_from_psi,
    continuity_residual,
    current,
    current_divergence,
    hj_residual,
    madelung_decomposition,
    potentials_from_psi,
    psi_from_potentials,
    synchronous_volume_diagnostic,
    wave_residual,
)

CONSTANTS = PhysicalConstants()
METRIC = config_metric(CONSTANTS)
Q = np.array([0.1, -0.2, 0.3, 0.05, 0.2, -0.3, 0.4, 0.1, -0.15, 0.25])
UNIFORM = FieldConfig.uniform((0.1, -0.2, 0.05), (0.2, 0.1, -0.3))


def _linear_pair() -> PotentialPair:
    def S(q):
        return q[0] * -1.2 + q[1] * 0.4 + q[5] * 0.3

    def chi(q):
        return q[2] * 0.05 + q[6] * 0.02 + 1.4

    return PotentialPair.of(S, chi)


def test_psi_amplitude_and_phase() -> None:
    pair = _linear_pair()
    psi = psi_from_potentials(pair, CONSTANTS)
    value = complex(psi(Q))

    chi = float(pair.chi(Q))
    assert abs(value) == pytest.approx(chi ** -CONSTANTS.amplitude_power)
    assert math.remainder(np.angle(value) - float(pair.S(Q)), 2.0 * math.pi) == pytest.approx(
        0.0, abs=1e-12
    )


def test_chi_and_action_gradient_recovered_from_psi() -> None:
    pair = _linear_pair()
    psi = psi_from_potentials(pair, CONSTANTS)

    recovered = potentials_from_psi(psi, Q, CONSTANTS)
    expected_grad = np.zeros(10)
    expected_grad[[0, 1, 5]] = [-1.2, 0.4, 0.3]

    assert recovered.chi == pytest.approx(float(pair.chi(Q)), rel=1e-12)
    np.testing.assert_allclose(recovered.grad_s, expected_grad, atol=1e-12)
    assert float(chi_from_psi(psi, CONSTANTS)(Q)) == pytest.approx(recovered.chi, rel=1e-12)


def test_node_raises_zero_amplitude() -> None:
    def psi(q):
        return q[0] * 0.0 + 0.0j

    with pytest.raises(ZeroAmplitude) as excinfo:
        potentials_from_psi(psi, Q, CONSTANTS)

    np.testing.assert_array_equal(excinfo.value.point, Q)


def test_nonpositive_weyl_factor_in_psi() -> None:
    psi = psi_from_potentials(PotentialPair.of(0.0, -1.0), CONSTANTS)

    with pytest.raises(NonpositiveWeylFactor):
        psi(Q)


@pytest.mark.parametrize("fields", [FieldConfig.none(), UNIFORM], ids=["free", "uniform"])
def test_madelung_identity_holds_for_arbitrary_pairs(fields: FieldConfig) -> None:
    rng = rng_for(5, 4)
    for _ in range(3):
        pair = random_pair(rng)

        sample = madelung_decomposition(pair, Q, fields, CONSTANTS, METRIC)

        assert sample.residual < 1e-8


def test_continuity_jet_and_finite_difference_agree() -> None:
    pair = random_pair(rng_for(9, 1))

    exact = continuity_residual(pair, Q, UNIFORM, CONSTANTS, METRIC)
    approximate = continuity_residual(pair, Q, UNIFORM, CONSTANTS, METRIC, mode="fd")

    assert approximate == pytest.approx(exact, rel=1e-5, abs=1e-6)


def test_hj_curvature_modes_agree() -> None:
    pair = random_pair(rng_for(9, 2))

    weyl = hj_residual(pair, Q, FieldConfig.none(), CONSTANTS, METRIC)
    direct = hj_residual(pair, Q, FieldConfig.none(), CONSTANTS, METRIC, curvature_mode="direct")

    assert direct == pytest.approx(weyl, rel=1e-8)


def test_hj_rejects_unknown_curvature_mode() -> None:
    with pytest.raises(ValueError, match="curvature mode"):
        hj_residual(_linear_pair(), Q, FieldConfig.none(), CONSTANTS, METRIC, curvature_mode="x")


def test_plane_wave_residual_is_dispersion_relation() -> None:
    p = np.array([1.3, 0.2, -0.4, 0.1])
    psi = plane_wave_psi([p], [1.0], CONSTANTS)

    w = wave_residual(psi, Q, FieldConfig.none(), CONSTANTS, METRIC)
    r = METRIC.constant_curvature
    expected = -(p[0] ** 2) + float(p[1:] @ p[1:]) + CONSTANTS.gamma2 * r

    assert w / complex(psi(Q)) == pytest.approx(expected, rel=1e-10)


def test_plane_wave_current_is_momentum() -> None:
    p = on_shell_momentum((0.3, 0.0, -0.2), CONSTANTS.m, CONSTANTS.c)
    psi = plane_wave_psi([p], [1.0], CONSTANTS)

    sample = current(psi, Q, FieldConfig.none(), CONSTANTS, METRIC)

    np.testing.assert_allclose(sample.j[:4], p, atol=1e-12)
    np.testing.assert_allclose(sample.j[4:], 0.0, atol=1e-12)
    assert sample.imaginary < 1e-14
    assert current_divergence(psi, Q, FieldConfig.none(), CONSTANTS, METRIC) == pytest.approx(
        0.0, abs=1e-12
    )


def test_current_reports_imaginary_part_when_conjugate_jet_disagrees() -> None:
    p = on_shell_momentum((0.3, 0.0, -0.2), CONSTANTS.m, CONSTANTS.c)
    wave = plane_wave_psi([p], [1.0], CONSTANTS)
    calls = []

    def drifting(q):
        calls.append(q)
        return wave(q) if len(calls) == 1 else jets.exp(q[0] * 0.5)

    sample = current(drifting, Q, FieldConfig.none(), CONSTANTS, METRIC)

    assert len(calls) == 2
    assert sample.imaginary > 1e-3


def test_current_divergence_links_to_continuity() -> None:
    pair = random_pair(rng_for(13, 1))
    psi = psi_from_potentials(pair, CONSTANTS)

    div = current_divergence(psi, Q, UNIFORM, CONSTANTS, METRIC)
    weight = float(pair.chi(Q)) ** (-CONSTANTS.n)
    predicted = weight * continuity_residual(pair, Q, UNIFORM, CONSTANTS, METRIC)

    assert div == pytest.approx(predicted, rel=1e-8, abs=1e-10)


def test_current_divergence_matches_wave_source() -> None:
    pair = random_pair(rng_for(13, 2))
    psi = psi_from_potentials(pair, CONSTANTS)

    div = current_divergence(psi, Q, FieldConfig.none(), CONSTANTS, METRIC)
    w = wave_residual(psi, Q, FieldConfig.none(), CONSTANTS, METRIC)
    source = float(np.imag(np.conj(complex(psi(Q))) * w)) / CONSTANTS.hbar

    assert div == pytest.approx(-source, rel=1e-8, abs=1e-10)


def test_synchronous_volume_for_unit_weyl_factor() -> None:
    points = [Q, Q * 0.5]

    values = synchronous_volume_diagnostic(points, 1.0, METRIC)

    assert values.shape == (2,)
    for point, value in zip(points, values):
        root = math.sqrt(abs(np.linalg.det(np.asarray(METRIC(point), dtype=float))))
        assert value == pytest.approx(METRIC.constant_curvature * root, rel=1e-10)


def test_jets_pass_through_wave_field() -> None:
    psi = psi_from_potentials(_linear_pair(), CONSTANTS)

    assert isinstance(psi(jets.seed(Q)), jets.Jet)
