from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spintop.core import jets
from spintop.core.errors import DomainError, SingularChart, UnsupportedRep
from spintop.core.lorentz import (
    BASIS,
    G,
    EulerAngles,
    SpinorRep,
    adjoint_matrix,
    algebra_metric,
    casimir,
    compose_angles,
    conjugate_rep_matrix,
    euler_from_lorentz,
    group_metric,
    invariant_frame,
    is_proper_lorentz,
    killing_form,
    killing_vectors,
    left_translation_jacobian,
    lorentz_from_euler,
    rep_generators,
    rep_matrix,
    rep_matrix_from_sl2c,
    sl2c_from_euler,
    spin_matrices,
    structure_constants,
    symmetric_power,
    vector_map,
)

rotation = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
rapidity = st.floats(min_value=-0.6, max_value=0.6, allow_nan=False)
angles = st.tuples(rotation, rotation, rotation, rapidity, rapidity, rapidity).map(np.array)

THETA = np.array([0.3, -0.4, 0.7, 0.2, -0.1, 0.35])


@settings(max_examples=30, deadline=None)
@given(angles)
def test_fourleg_is_proper_lorentz(theta: np.ndarray) -> None:
    matrix = lorentz_from_euler(theta)

    np.testing.assert_allclose(matrix.T @ G @ matrix, G, atol=1e-12)
    assert is_proper_lorentz(matrix)


@settings(max_examples=30, deadline=None)
@given(angles)
def test_sl2c_covers_fourleg(theta: np.ndarray) -> None:
    A = sl2c_from_euler(theta)

    assert np.linalg.det(A) == pytest.approx(1.0, abs=1e-12)
    np.testing.assert_allclose(vector_map(A), lorentz_from_euler(theta), atol=1e-12)


def test_identity_angles_give_identity() -> None:
    np.testing.assert_allclose(lorentz_from_euler(np.zeros(6)), np.eye(4), atol=1e-15)
    np.testing.assert_allclose(sl2c_from_euler(np.zeros(6)), np.eye(2), atol=1e-15)


def test_euler_angles_value_object() -> None:
    value = EulerAngles((1, 2, 3, 0.1, 0.2, 0.3))

    assert value.rotations == (1.0, 2.0, 3.0)
    assert value.boosts == (0.1, 0.2, 0.3)
    np.testing.assert_allclose(lorentz_from_euler(value), lorentz_from_euler(value.as_array()))


@pytest.mark.parametrize("bad", [np.zeros(5), np.array([0.0, 0.0, math.nan, 0.0, 0.0, 0.0])])
def test_bad_angles_raise_domain_error(bad: np.ndarray) -> None:
    with pytest.raises(DomainError):
        lorentz_from_euler(bad)


def test_euler_angles_rejects_infinite_entry() -> None:
    with pytest.raises(DomainError, match="finite"):
        EulerAngles((0.0, 0.0, 0.0, 0.0, 0.0, math.inf))


def test_group_metric_at_identity_has_positive_rotations() -> None:
    metric = group_metric(np.zeros(6), 1.0)

    np.testing.assert_allclose(metric, np.diag([2.0, 2.0, 2.0, -2.0, -2.0, -2.0]), atol=1e-14)
    np.testing.assert_allclose(group_metric(np.zeros(6), 2.0, sign=-1), -4.0 * metric, atol=1e-13)


def test_group_metric_signature_is_three_three() -> None:
    eigenvalues = np.linalg.eigvalsh(group_metric(THETA, 1.3))

    assert int(np.sum(eigenvalues > 0)) == 3
    assert int(np.sum(eigenvalues < 0)) == 3


def test_group_metric_rejects_bad_sign() -> None:
    with pytest.raises(ValueError, match="sign"):
        group_metric(THETA, 1.0, sign=2)


def test_group_metric_equals_pullback_of_algebra_metric() -> None:
    xi = invariant_frame(THETA).xi
    expected = xi.T @ algebra_metric(1.0) @ xi

    np.testing.assert_allclose(group_metric(THETA, 1.0), expected, atol=1e-12)


def test_closed_form_killing_vectors_match_exact_derivative() -> None:
    np.testing.assert_allclose(killing_vectors(THETA), invariant_frame(THETA).xi, atol=1e-12)


def test_killing_vectors_accept_jet_angles() -> None:
    theta = jets.seed(THETA)
    xi = killing_vectors(theta)

    assert isinstance(xi, jets.Jet)
    np.testing.assert_allclose(xi.val, killing_vectors(THETA), atol=1e-13)


def test_gimbal_lock_is_singular_chart() -> None:
    with pytest.raises(SingularChart) as excinfo:
        invariant_frame([0.0, math.pi / 2, 0.0, 0.0, 0.0, 0.0])

    assert abs(excinfo.value.det) < 1e-10


def test_structure_constants_are_antisymmetric() -> None:
    f = structure_constants()

    np.testing.assert_allclose(f, -np.transpose(f, (0, 2, 1)), atol=1e-14)
    for a, Xa in enumerate(BASIS):
        for b, Xb in enumerate(BASIS):
            bracket = Xa @ Xb - Xb @ Xa
            rebuilt = sum(f[c, a, b] * BASIS[c] for c in range(6))
            np.testing.assert_allclose(bracket, rebuilt, atol=1e-14)


def test_killing_form_is_twice_trace_form() -> None:
    trace_form = np.diag([np.trace(X @ X) for X in BASIS])

    np.testing.assert_allclose(killing_form(), 2.0 * trace_form, atol=1e-12)


def test_adjoint_matrix_of_identity_is_identity() -> None:
    np.testing.assert_allclose(adjoint_matrix(np.eye(4)), np.eye(6), atol=1e-15)


def test_adjoint_action_preserves_trace_form() -> None:
    ad = adjoint_matrix(lorentz_from_euler(THETA))
    eta = algebra_metric(1.0)

    np.testing.assert_allclose(ad.T @ eta @ ad, eta, atol=1e-12)


def test_euler_inversion_recovers_angles() -> None:
    matrix = lorentz_from_euler(THETA)

    recovered = euler_from_lorentz(matrix, guess=THETA + 0.02)

    np.testing.assert_allclose(recovered, THETA, atol=1e-10)


def test_euler_inversion_reports_divergence() -> None:
    with pytest.raises(DomainError, match="did not converge"):
        euler_from_lorentz(lorentz_from_euler(THETA), max_iter=0)


def test_compose_angles_matches_matrix_product() -> None:
    second = np.array([0.1, 0.05, -0.2, -0.1, 0.15, 0.05])

    combined = compose_angles(THETA, second)

    np.testing.assert_allclose(
        lorentz_from_euler(combined),
        lorentz_from_euler(THETA) @ lorentz_from_euler(second),
        atol=1e-12,
    )


def test_left_translation_jacobian_matches_finite_differences() -> None:
    element = np.array([0.2, -0.1, 0.15, 0.05, 0.1, -0.2])
    h = 1e-6

    translated, jacobian = left_translation_jacobian(element, THETA)
    columns = []
    for k in range(6):
        step = np.zeros(6)
        step[k] = h
        plus = compose_angles(element, THETA + step, guess=translated)
        minus = compose_angles(element, THETA - step, guess=translated)
        columns.append((plus - minus) / (2.0 * h))

    np.testing.assert_allclose(np.array(columns).T, jacobian, atol=1e-6)


@pytest.mark.parametrize("sign", [1, -1])
def test_group_metric_is_left_invariant(sign: int) -> None:
    element = np.array([0.25, 0.1, -0.3, 0.15, -0.05, 0.1])

    translated, jacobian = left_translation_jacobian(element, THETA)
    pulled = jacobian.T @ group_metric(translated, 1.3, sign) @ jacobian

    np.testing.assert_allclose(pulled, group_metric(THETA, 1.3, sign), atol=1e-10)


@pytest.mark.parametrize("k", range(6))
@pytest.mark.parametrize("label", [(1, 1), (0, 3), (2, 1)])
def test_rep_matrix_is_homomorphic_on_one_parameter_subgroups(
    k: int, label: tuple[int, int]
) -> None:
    s, t = np.zeros(6), np.zeros(6)
    s[k], t[k] = 0.4, -0.15

    product = rep_matrix(label, s) @ rep_matrix(label, t)

    np.testing.assert_allclose(product, rep_matrix(label, s + t), atol=1e-12)


def test_rep_matrix_respects_composition() -> None:
    second = np.array([-0.1, 0.2, 0.05, 0.1, 0.0, -0.15])
    combined = compose_angles(THETA, second)

    product = rep_matrix((1, 1), THETA) @ rep_matrix((1, 1), second)

    np.testing.assert_allclose(product, rep_matrix((1, 1), combined), atol=1e-10)


def test_spinor_rep_label_properties() -> None:
    rep = SpinorRep(1, 2)

    assert rep.u == 0.5
    assert rep.v == 1.0
    assert rep.dim == 6
    assert rep.casimir_value == pytest.approx(2.0 * (0.75 + 2.0))
    assert rep.swapped() == SpinorRep(2, 1)
    assert str(rep) == "(1/2,1)"


@pytest.mark.parametrize("label", [(4, 0), (0, -1), (True, 0)])
def test_unsupported_labels(label: tuple[int, int]) -> None:
    with pytest.raises(UnsupportedRep):
        SpinorRep(*label)


def test_spin_matrices_commutation() -> None:
    J1, J2, J3 = spin_matrices(3)

    np.testing.assert_allclose(J1 @ J2 - J2 @ J1, 1j * J3, atol=1e-14)
    np.testing.assert_allclose(J1 @ J1 + J2 @ J2 + J3 @ J3, 3.75 * np.eye(4), atol=1e-13)


def test_lorentz_algebra_relations_in_rep() -> None:
    J, K = rep_generators((2, 1))

    np.testing.assert_allclose(J[0] @ K[1] - K[1] @ J[0], 1j * K[2], atol=1e-13)
    np.testing.assert_allclose(K[0] @ K[1] - K[1] @ K[0], -1j * J[2], atol=1e-13)


@pytest.mark.parametrize("label", [(0, 1), (1, 0), (1, 1), (2, 1), (3, 3)])
@pytest.mark.parametrize("dotted", [False, True])
def test_casimir_is_multiple_of_identity(label: tuple[int, int], dotted: bool) -> None:
    rep = SpinorRep(*label)

    np.testing.assert_allclose(
        casimir(rep, dotted=dotted), rep.casimir_value * np.eye(rep.dim), atol=1e-12
    )


def test_dirac_block_casimir_is_three_halves() -> None:
    np.testing.assert_allclose(casimir((0, 1)), 1.5 * np.eye(2), atol=1e-14)


def test_weyl_rep_matches_sl2c_element() -> None:
    np.testing.assert_allclose(rep_matrix((0, 1), THETA), sl2c_from_euler(THETA), atol=1e-12)


@pytest.mark.parametrize("label", [(0, 1), (1, 0), (1, 1), (0, 2), (2, 1), (1, 3), (3, 3)])
def test_rep_matrix_agrees_with_symmetric_powers(label: tuple[int, int]) -> None:
    D = rep_matrix(label, THETA)
    oracle = rep_matrix_from_sl2c(label, sl2c_from_euler(THETA))

    np.testing.assert_allclose(D, oracle, atol=1e-10 * max(1.0, np.abs(D).max()))


@pytest.mark.parametrize("label", [(1, 0), (1, 1), (2, 1)])
def test_conjugate_rep_relation(label: tuple[int, int]) -> None:
    rep = SpinorRep(*label)
    D = rep_matrix(rep, THETA)

    np.testing.assert_allclose(
        D.conj().T @ conjugate_rep_matrix(rep, THETA), np.eye(rep.dim), atol=1e-10
    )


def test_rep_matrix_inverse_flag() -> None:
    D = rep_matrix((1, 1), THETA)
    D_inv = rep_matrix((1, 1), THETA, inverse=True)

    np.testing.assert_allclose(D @ D_inv, np.eye(4), atol=1e-12)


def test_symmetric_power_of_degree_one_is_identity_map() -> None:
    M = np.array([[1.0 + 1.0j, 2.0], [0.5, -1.0j]])

    np.testing.assert_allclose(symmetric_power(M, 1), M)
    np.testing.assert_allclose(symmetric_power(M, 0), np.ones((1, 1)))
