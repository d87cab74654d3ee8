"""Hamilton-Jacobi, continuity and linear wave residuals on the configuration space.

A pair (S, chi) maps to psi = chi^-(n-2)/2 exp(i S / hbar).  For any smooth pair,
not only solutions, the linear wave residual W(psi) satisfies

    chi^((n+2)/2) exp(-i S / hbar) W(psi) = hj_residual - i hbar continuity_residual

which is the identity :func:`madelung_decomposition` evaluates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from . import jets
from .constants import PhysicalConstants
from .errors import NonpositiveWeylFactor, ZeroAmplitude
from .fields import FieldConfig, em_lift
from .geometry import (
    MetricField,
    MetricSample,
    ScalarField,
    as_scalar_field,
    conformal_scale,
    coords,
    curvature,
    field_derivatives,
    scalar_curvature,
)
from .weyl import weyl_scalar_curvature

logger = logging.getLogger(__name__)

__all__ = [
    "NODE_THRESHOLD",
    "PotentialPair",
    "WaveField",
    "PotentialGradient",
    "CurrentSample",
    "MadelungSample",
    "psi_from_potentials",
    "potentials_from_psi",
    "chi_from_psi",
    "hj_residual",
    "continuity_residual",
    "wave_residual",
    "current",
    "current_divergence",
    "madelung_decomposition",
    "synchronous_volume_diagnostic",
]

NODE_THRESHOLD = 1e-12


@dataclass(frozen=True)
class PotentialPair:
    """Action S (units of hbar) and positive Weyl factor chi."""

    S: ScalarField
    chi: ScalarField

    @classmethod
    def of(cls, S: Any, chi: Any) -> "PotentialPair":
        return cls(S=as_scalar_field(S), chi=as_scalar_field(chi))


@dataclass(frozen=True)
class WaveField:
    """Complex scalar psi(q), evaluable on plain coordinates and on jets."""

    psi: Callable[[Any], Any]
    name: str = "psi"

    def __call__(self, q: Any) -> Any:
        return self.psi(q)


@dataclass(frozen=True, slots=True)
class PotentialGradient:
    """Weyl factor and action gradient recovered from psi at one point."""

    chi: float
    grad_s: np.ndarray


@dataclass(frozen=True, slots=True)
class CurrentSample:
    """Contravariant current j^i and the largest imaginary component of its assembly."""

    j: np.ndarray
    imaginary: float


@dataclass(frozen=True, slots=True)
class MadelungSample:
    lhs: complex
    hj: float
    continuity: float
    hbar: float

    @property
    def predicted(self) -> complex:
        return complex(self.hj, -self.hbar * self.continuity)

    @property
    def residual(self) -> float:
        """|lhs - (hj - i hbar continuity)| relative to max(|prediction|, 1)."""

        return abs(self.lhs - self.predicted) / max(abs(self.predicted), 1.0)


def psi_from_potentials(pair: PotentialPair, constants: PhysicalConstants) -> WaveField:
    """psi = chi^-(n-2)/2 exp(i S / hbar)."""

    power = -constants.amplitude_power
    hbar = constants.hbar

    def psi(q: Any) -> Any:
        chi_value = pair.chi(q)
        raw = float(np.real(jets.value(chi_value)))
        if not raw > 0.0:
            raise NonpositiveWeylFactor(raw)
        return chi_value**power * jets.exp(pair.S(q) * (1j / hbar))

    return WaveField(psi=psi, name="psi(S,chi)")


def _modulus_squared(z: Any) -> Any:
    if isinstance(z, jets.Jet):
        return (z * z.conj()).real
    return np.abs(z) ** 2


def chi_from_psi(psi: Callable[[Any], Any], constants: PhysicalConstants) -> ScalarField:
    """Weyl factor chi = |psi|^(-2/(n-2)) as a differentiable field."""

    exponent = -1.0 / (2.0 * constants.amplitude_power)

    def chi(q: Any) -> Any:
        return _modulus_squared(psi(q)) ** exponent

    return chi


def potentials_from_psi(
    psi: Callable[[Any], Any], q: Any, constants: PhysicalConstants
) -> PotentialGradient:
    """Recover chi = |psi|^(-2/(n-2)) and dS = hbar Im(d psi / psi) at *q*."""

    val, grad = field_derivatives(psi, q, order=1)
    amplitude = float(abs(val))
    if amplitude < NODE_THRESHOLD:
        raise ZeroAmplitude(amplitude, jets.value(coords(q)))
    chi = amplitude ** (-1.0 / constants.amplitude_power)
    grad_s = constants.hbar * np.imag(grad / val)
    return PotentialGradient(chi=chi, grad_s=np.asarray(grad_s, dtype=float))


def _em_terms(
    fields: FieldConfig,
    q: Any,
    constants: PhysicalConstants,
    sample: MetricSample,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Return (A_i, d_j A_i, A^i, div A) for the lifted potential."""

    n = sample.dim
    if fields.kind == "none":
        zero = np.zeros(n)
        return zero, np.zeros((n, n)), zero, 0.0
    lift, grad = field_derivatives(lambda p: em_lift(fields, p, constants), q, order=1)
    lift = np.real(lift)
    grad = np.real(grad)
    a_up = sample.inverse @ lift
    div = (
        np.einsum("iji,j->", sample.inverse_derivative, lift)
        + np.einsum("ij,ji->", sample.inverse, grad)
        + sample.log_volume_gradient @ a_up
    )
    return lift, grad, a_up, float(div)


def _weyl_curvature_bar(
    metric: MetricField, chi: ScalarField, q: Any, chi_value: float, mode: str
) -> float:
    if mode == "weyl":
        return chi_value**2 * weyl_scalar_curvature(metric, chi, q)
    if mode == "direct":
        return curvature(conformal_scale(metric, chi), q).scalar
    raise ValueError(f"unknown curvature mode {mode!r}")


def hj_residual(
    pair: PotentialPair,
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
    *,
    curvature_mode: str = "weyl",
) -> float:
    """gbar^{ij} P_i P_j + hbar^2 gamma^2 Rbar with P = dS - (e/c) A and gbar = chi^-2 g."""

    sample = metric.sample(q, order=1)
    _, s_grad = field_derivatives(pair.S, q, order=1)
    chi_value = float(np.real(jets.value(pair.chi(jets.value(coords(q))))))
    if not chi_value > 0.0:
        raise NonpositiveWeylFactor(chi_value)
    lift, _, _, _ = _em_terms(fields, q, constants, sample)
    momentum = np.real(s_grad) - (constants.e / constants.c) * lift
    kinetic = chi_value**2 * float(momentum @ sample.inverse @ momentum)
    r_bar = _weyl_curvature_bar(metric, pair.chi, q, chi_value, curvature_mode)
    return kinetic + constants.hbar**2 * constants.gamma2 * r_bar


def continuity_residual(
    pair: PotentialPair,
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
    *,
    mode: str = "jet",
    step: float = 1e-4,
) -> float:
    """(1/sqrt gbar) d_i(sqrt gbar gbar^{ij} (d_j S - (e/c) A_j))."""

    if mode == "fd":
        return _continuity_fd(pair, q, fields, constants, metric, step)
    n = metric.dim
    sample = metric.sample(q, order=1)
    _, s_grad, s_hess = field_derivatives(pair.S, q, order=2)
    chi_value, chi_grad = field_derivatives(pair.chi, q, order=1)
    chi_value = float(np.real(chi_value))
    if not chi_value > 0.0:
        raise NonpositiveWeylFactor(chi_value)
    chi_grad = np.real(chi_grad)
    lift, lift_grad, _, _ = _em_terms(fields, q, constants, sample)
    coupling = constants.e / constants.c
    momentum = np.real(s_grad) - coupling * lift
    dmomentum = np.real(s_hess) - coupling * lift_grad
    ginv = sample.inverse
    div_p = (
        np.einsum("iji,j->", sample.inverse_derivative, momentum)
        + np.einsum("ij,ji->", ginv, dmomentum)
        + sample.log_volume_gradient @ (ginv @ momentum)
    )
    return float(
        chi_value**2 * div_p - (n - 2) * chi_value * float(momentum @ ginv @ chi_grad)
    )


def _continuity_fd(
    pair: PotentialPair,
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
    step: float,
) -> float:
    point = jets.value(coords(q)).astype(float)
    n = metric.dim
    coupling = constants.e / constants.c

    def density_flux(p: np.ndarray) -> np.ndarray:
        g = np.asarray(metric(p), dtype=float)
        chi_value = float(np.real(pair.chi(p)))
        _, s_grad = field_derivatives(pair.S, p, order=1)
        lift = np.zeros(n) if fields.kind == "none" else np.real(em_lift(fields, p, constants))
        momentum = np.real(s_grad) - coupling * lift
        root = np.sqrt(abs(np.linalg.det(g))) * chi_value**-n
        return root * chi_value**2 * np.linalg.solve(g, momentum)

    total = 0.0
    eye = np.eye(n) * step
    for i in range(n):
        total += (density_flux(point + eye[i])[i] - density_flux(point - eye[i])[i]) / (2.0 * step)
    g0 = np.asarray(metric(point), dtype=float)
    root0 = np.sqrt(abs(np.linalg.det(g0))) * float(np.real(pair.chi(point))) ** -n
    return float(total / root0)


def _wave_parts(
    psi: Callable[[Any], Any],
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
) -> tuple[complex, np.ndarray, np.ndarray, MetricSample]:
    sample = metric.sample(q, order=1)
    val, grad, hess = field_derivatives(psi, q, order=2)
    return complex(val), np.asarray(grad, dtype=complex), np.asarray(hess, dtype=complex), sample


def wave_residual(
    psi: Callable[[Any], Any],
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
    *,
    curvature_value: float | None = None,
) -> complex:
    """Return g^{ij} D_i D_j psi + hbar^2 gamma^2 R psi.

    D_i = -i hbar nabla_i - (e/c) A_i is the gauge-covariant momentum.
    """

    val, grad, hess, sample = _wave_parts(psi, q, fields, constants, metric)
    hbar = constants.hbar
    coupling = constants.e / constants.c
    ginv = sample.inverse
    contracted = np.einsum("ij,kij->k", ginv, sample.christoffel)
    laplacian = np.einsum("ij,ij->", ginv, hess) - contracted @ grad
    lift, _, a_up, div_a = _em_terms(fields, q, constants, sample)
    r = scalar_curvature(metric, q) if curvature_value is None else curvature_value
    result = (
        -(hbar**2) * laplacian
        + 1j * hbar * coupling * div_a * val
        + 2j * hbar * coupling * (a_up @ grad)
        + coupling**2 * float(lift @ a_up) * val
        + hbar**2 * constants.gamma2 * r * val
    )
    return complex(result)


def current(
    psi: Callable[[Any], Any],
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
) -> CurrentSample:
    """j^i = g^{ij}[(-i hbar / 2)(psi* d_j psi - psi d_j psi*) - (e/c) A_j |psi|^2].

    psi* is differentiated as its own field, so the antisymmetric bracket comes
    from two separate jets; the imaginary part of j is reported, not discarded.
    """

    sample = metric.sample(q, order=1)
    val, grad = field_derivatives(psi, q, order=1)
    conj_val, conj_grad = field_derivatives(lambda x: _conjugate(psi(x)), q, order=1)
    lift, _, _, _ = _em_terms(fields, q, constants, sample)
    coupling = constants.e / constants.c
    bracket = conj_val * grad - val * conj_grad
    density = np.real(conj_val * val)
    raw = sample.inverse @ (-0.5j * constants.hbar * bracket - coupling * lift * density)
    return CurrentSample(j=np.real(raw), imaginary=float(np.abs(np.imag(raw)).max()))


def _conjugate(value: Any) -> Any:
    return value.conj() if isinstance(value, jets.Jet) else np.conj(value)


def current_divergence(
    psi: Callable[[Any], Any],
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
) -> float:
    """(1/sqrt g) d_i(sqrt g j^i) from exact first and second derivatives of psi."""

    val, grad, hess, sample = _wave_parts(psi, q, fields, constants, metric)
    lift, lift_grad, _, _ = _em_terms(fields, q, constants, sample)
    hbar = constants.hbar
    coupling = constants.e / constants.c
    density = abs(val) ** 2
    density_grad = 2.0 * np.real(np.conj(val) * grad)
    flux = hbar * np.imag(np.conj(val) * grad) - coupling * lift * density
    # dflux[j, i] = d_i flux_j
    dflux = hbar * np.imag(np.outer(grad, np.conj(grad)) + np.conj(val) * hess) - coupling * (
        lift_grad * density + np.outer(lift, density_grad)
    )
    ginv = sample.inverse
    j_up = ginv @ flux
    div = (
        np.einsum("iji,j->", sample.inverse_derivative, flux)
        + np.einsum("ij,ji->", ginv, dflux)
        + sample.log_volume_gradient @ j_up
    )
    return float(div)


def madelung_decomposition(
    pair: PotentialPair,
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
) -> MadelungSample:
    """Evaluate both sides of the amplitude-phase split of W(psi) at *q*."""

    psi = psi_from_potentials(pair, constants)
    point = jets.value(coords(q)).astype(float)
    w = wave_residual(psi, point, fields, constants, metric)
    chi_value = float(np.real(pair.chi(point)))
    phase = np.exp(-1j * float(np.real(pair.S(point))) / constants.hbar)
    lhs = chi_value ** ((constants.n + 2) / 2.0) * phase * w
    return MadelungSample(
        lhs=complex(lhs),
        hj=hj_residual(pair, point, fields, constants, metric),
        continuity=continuity_residual(pair, point, fields, constants, metric),
        hbar=constants.hbar,
    )


def synchronous_volume_diagnostic(
    points: Sequence[Any],
    chi: Any,
    metric: MetricField,
) -> np.ndarray:
    """Rbar sqrt|gbar| at each point; reported along paths, never thresholded."""

    chi_field = as_scalar_field(chi)
    n = metric.dim
    values = []
    for q in points:
        point = jets.value(coords(q)).astype(float)
        chi_value = float(np.real(jets.value(chi_field(point))))
        r_bar = chi_value**2 * weyl_scalar_curvature(metric, chi_field, point)
        root = np.sqrt(abs(np.linalg.det(np.asarray(metric(point), dtype=float)))) * chi_value**-n
        values.append(r_bar * root)
    return np.asarray(values)
