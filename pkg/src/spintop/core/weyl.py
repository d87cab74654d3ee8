"""Weyl conformal geometry built on a metric and a positive Weyl factor chi.

The Weyl connection used here is the Levi-Civita connection of chi^-2 g,

    Gamma^i_{jk} = {i jk} - delta^i_j phi_k - delta^i_k phi_j + g_{jk} phi^i,

with phi_i = d_i ln chi.  Its Ricci tensor contracted with g^{jl} is the Weyl
scalar curvature R_W, and chi^2 R_W is the scalar curvature of chi^-2 g.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from . import jets
from .constants import PhysicalConstants
from .errors import ImaginaryRadicand, NonpositiveGauge, NonpositiveWeylFactor
from .geometry import (
    MetricField,
    MetricSample,
    ScalarField,
    as_scalar_field,
    connection_curvature,
    coords,
    field_derivatives,
    scalar_curvature,
)

logger = logging.getLogger(__name__)

__all__ = [
    "WEIGHT_METRIC",
    "WEIGHT_CHI",
    "weight_psi",
    "WeylPotential",
    "WeylScalarForms",
    "GaugeTransform",
    "QuantumLagrangian",
    "weyl_connection",
    "weyl_connection_curvature",
    "weyl_curvature_forms",
    "weyl_scalar_curvature",
    "co_covariant_derivative",
    "gauge_transform",
    "lagrangian_quantum",
    "kaluza_klein_shift",
]

WEIGHT_METRIC = 1.0
WEIGHT_CHI = 0.5
FORM_AGREEMENT = 1e-10

_logged_events: set[str] = set()


def _log_once(event: str, message: str, *args: Any) -> None:
    if event in _logged_events:
        return
    _logged_events.add(event)
    logger.info(message, *args)


def weight_psi(n: int = 10) -> float:
    """Weyl weight of the wave amplitude chi^-(n-2)/2."""

    return -(n - 2) / 4.0


def _chi_jets(chi: ScalarField, q: Any) -> tuple[float, np.ndarray, np.ndarray]:
    val, grad, hess = field_derivatives(chi, q, order=2)
    chi_value = float(np.real(val))
    if not chi_value > 0.0:
        raise NonpositiveWeylFactor(chi_value)
    return chi_value, np.real(grad), np.real(hess)


@dataclass(frozen=True)
class WeylPotential:
    """Covariant Weyl potential phi_i, either given directly or derived from chi."""

    field: Callable[[Any], Any] | None = None
    chi: ScalarField | None = None

    @classmethod
    def from_chi(cls, chi: Any) -> "WeylPotential":
        return cls(chi=as_scalar_field(chi))

    @classmethod
    def zero(cls) -> "WeylPotential":
        return cls(chi=as_scalar_field(1.0))

    def sample(self, q: Any) -> tuple[np.ndarray, np.ndarray]:
        """Return (phi_i, d_j phi_i) with the derivative index last."""

        if self.chi is not None:
            chi_value, grad, hess = _chi_jets(self.chi, q)
            phi = grad / chi_value
            dphi = hess / chi_value - np.outer(grad, grad) / chi_value**2
            return phi, dphi
        if self.field is None:
            raise ValueError("WeylPotential needs a field or a Weyl factor")
        val, grad = field_derivatives(self.field, q, order=1)
        return np.asarray(val, dtype=float), np.asarray(grad, dtype=float)

    def curl_residual(self, q: Any) -> float:
        _, dphi = self.sample(q)
        return float(np.abs(dphi - dphi.T).max())


def _connection_terms(
    sample: MetricSample, phi: np.ndarray, dphi: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray | None]:
    n = sample.dim
    eye = np.eye(n)
    phi_up = sample.inverse @ phi
    gamma = (
        sample.christoffel
        - np.einsum("ij,k->ijk", eye, phi)
        - np.einsum("ik,j->ijk", eye, phi)
        + np.einsum("jk,i->ijk", sample.g, phi_up)
    )
    if dphi is None:
        return gamma, None
    dphi_up = np.einsum("ilm,l->im", sample.inverse_derivative, phi) + sample.inverse @ dphi
    dgamma = (
        sample.christoffel_derivative
        - np.einsum("ij,km->ijkm", eye, dphi)
        - np.einsum("ik,jm->ijkm", eye, dphi)
        + np.einsum("jkm,i->ijkm", sample.dg, phi_up)
        + np.einsum("jk,im->ijkm", sample.g, dphi_up)
    )
    return gamma, dgamma


def weyl_connection(metric: MetricField, phi: WeylPotential, q: Any) -> np.ndarray:
    """Return the Weyl connection Gamma^i_{jk} at *q*."""

    _log_once(
        "connection-sign",
        "EVENT=WEYL_CONNECTION_SIGN CHOICE=levi-civita-of-rescaled-metric "
        "CHRISTOFFEL=+1 DELTA_TERMS=-1 METRIC_TERM=+1",
    )
    sample = metric.sample(q, order=1)
    phi_value, _ = phi.sample(q)
    gamma, _ = _connection_terms(sample, phi_value, None)
    return gamma


def weyl_connection_curvature(metric: MetricField, phi: WeylPotential, q: Any) -> float:
    """g^{jl} Ric_{jl} of the Weyl connection; equals R_W when phi = d ln chi."""

    sample = metric.sample(q, order=2)
    phi_value, dphi = phi.sample(q)
    gamma, dgamma = _connection_terms(sample, phi_value, dphi)
    _, _, scalar = connection_curvature(gamma, dgamma, sample.inverse)
    return scalar


@dataclass(frozen=True, slots=True)
class WeylScalarForms:
    """The Weyl scalar curvature evaluated several equivalent ways."""

    plain: float
    chi_form: float
    phi_form: float
    printed_phi_form: float

    @property
    def disagreement(self) -> float:
        return abs(self.chi_form - self.phi_form) / max(abs(self.chi_form), 1.0)


def weyl_curvature_forms(metric: MetricField, chi: Any, q: Any) -> WeylScalarForms:
    chi_field = as_scalar_field(chi)
    n = metric.dim
    sample = metric.sample(q, order=1)
    chi_value, grad, hess = _chi_jets(chi_field, q)
    ginv = sample.inverse
    contracted = np.einsum("ij,kij->k", ginv, sample.christoffel)
    box_chi = float(np.einsum("ij,ij->", ginv, hess) - contracted @ grad)
    grad_sq = float(grad @ ginv @ grad)
    plain = scalar_curvature(metric, q)

    chi_form = plain + 2.0 * (n - 1) * box_chi / chi_value - n * (n - 1) * grad_sq / chi_value**2

    phi = grad / chi_value
    dphi = hess / chi_value - np.outer(grad, grad) / chi_value**2
    div_phi = float(np.einsum("ij,ij->", ginv, dphi) - contracted @ phi)
    phi_sq = float(phi @ ginv @ phi)
    phi_form = plain + 2.0 * (n - 1) * div_phi - (n - 1) * (n - 2) * phi_sq
    printed = plain + 2.0 * (n - 1) * div_phi - (n - 1) * phi_sq
    _log_once(
        "phi-form",
        "EVENT=WEYL_PHI_FORM_COEFFICIENT PRINTED=n-1 USED=(n-1)(n-2) N=%d",
        n,
    )
    return WeylScalarForms(
        plain=plain, chi_form=chi_form, phi_form=phi_form, printed_phi_form=printed
    )


def weyl_scalar_curvature(metric: MetricField, chi: Any, q: Any) -> float:
    """R_W = R + 2(n-1) Delta chi / chi - n(n-1) |grad chi|^2 / chi^2."""

    forms = weyl_curvature_forms(metric, chi, q)
    if forms.disagreement > FORM_AGREEMENT:
        logger.warning(
            "EVENT=WEYL_FORMS_DISAGREE CHI_FORM=%.15g PHI_FORM=%.15g",
            forms.chi_form,
            forms.phi_form,
        )
    return forms.chi_form


def co_covariant_derivative(
    metric: MetricField,
    phi: WeylPotential | None,
    f: Callable[[Any], Any],
    weight: float,
    q: Any,
) -> np.ndarray:
    """D_k f = nabla_k f - 2 w phi_k f for a covariant tensor of rank 0, 1 or 2.

    The derivative index comes first in the result.  With ``phi=None`` the
    Levi-Civita connection is used and the weight term vanishes.
    """

    sample = metric.sample(q, order=1)
    n = sample.dim
    if phi is None:
        gamma = sample.christoffel
        phi_value = np.zeros(n)
    else:
        phi_value, _ = phi.sample(q)
        gamma, _ = _connection_terms(sample, phi_value, None)

    val, grad = field_derivatives(f, q, order=1)
    rank = np.ndim(val)
    if rank == 0:
        nabla = np.asarray(grad)
    elif rank == 1:
        nabla = grad.T - np.einsum("mka,m->ka", gamma, val)
    elif rank == 2:
        nabla = (
            np.moveaxis(grad, -1, 0)
            - np.einsum("mka,mb->kab", gamma, val)
            - np.einsum("mkb,am->kab", gamma, val)
        )
    else:
        raise ValueError("co_covariant_derivative supports tensors of rank 0, 1 or 2")
    return nabla - 2.0 * weight * np.multiply.outer(phi_value, val)


@dataclass(frozen=True)
class GaugeTransform:
    """Weyl rescaling g -> rho g, chi -> rho^(1/2) chi with rho > 0."""

    rho: ScalarField

    def factor(self, q: Any) -> Any:
        value = self.rho(q)
        raw = float(np.real(jets.value(value)))
        if not raw > 0.0:
            raise NonpositiveGauge(raw)
        return value

    def apply(self, metric: MetricField, chi: Any) -> tuple[MetricField, ScalarField]:
        chi_field = as_scalar_field(chi)
        base = metric

        def evaluate(q: Any) -> Any:
            return base.evaluator(q) * self.factor(q)

        def chi_prime(q: Any) -> Any:
            return chi_field(q) * jets.sqrt(self.factor(q))

        constant = None
        rho_value = getattr(self.rho, "constant_value", None)
        if rho_value is not None and base.constant_curvature is not None:
            constant = base.constant_curvature / rho_value
        transformed = MetricField(
            evaluator=evaluate,
            dim=base.dim,
            name=f"{base.name}*rho",
            constant_curvature=constant,
            fd_step=base.fd_step,
        )
        return transformed, chi_prime


class _ConstantGauge:
    __slots__ = ("constant_value",)

    def __init__(self, value: float) -> None:
        self.constant_value = value

    def __call__(self, q: Any) -> float:
        return self.constant_value


def gauge_transform(metric: MetricField, chi: Any, rho: Any) -> tuple[MetricField, ScalarField]:
    """Return (rho g, rho^(1/2) chi) as differentiable fields."""

    if not callable(rho):
        value = float(rho)
        if not value > 0.0:
            raise NonpositiveGauge(value)
        rho = _ConstantGauge(value)
    return GaugeTransform(rho).apply(metric, chi)


@dataclass(frozen=True, slots=True)
class QuantumLagrangian:
    """Both integrands of the quantum Lagrangian with their radicands.

    ``value_curvature`` is -hbar sqrt(-gamma^2 Rbar gbar_ij qdot qdot) and ``value_weyl``
    is -hbar sqrt(R_W g_ij qdot qdot); a value is ``None`` when its radicand is
    negative.
    """

    radicand_curvature: float
    radicand_weyl: float
    value_curvature: float | None
    value_weyl: float | None

    @property
    def imaginary_curvature(self) -> bool:
        return self.value_curvature is None

    @property
    def imaginary_weyl(self) -> bool:
        return self.value_weyl is None

    @property
    def ratio(self) -> float:
        if self.radicand_weyl == 0.0:
            return math.nan
        return self.radicand_curvature / self.radicand_weyl

    def require_curvature(self) -> float:
        if self.value_curvature is None:
            raise ImaginaryRadicand(self.radicand_curvature)
        return self.value_curvature


def lagrangian_quantum(
    constants: PhysicalConstants,
    q: Any,
    qdot: Any,
    chi: Any,
    metric: MetricField,
) -> QuantumLagrangian:
    chi_field = as_scalar_field(chi)
    point = coords(q)
    velocity = np.asarray(qdot, dtype=float)
    g = np.asarray(metric(point), dtype=float)
    chi_value = float(np.real(jets.value(chi_field(point))))
    if not chi_value > 0.0:
        raise NonpositiveWeylFactor(chi_value)
    r_weyl = weyl_scalar_curvature(metric, chi_field, point)
    r_bar = chi_value**2 * r_weyl
    norm = float(velocity @ g @ velocity)
    radicand_curvature = -constants.gamma2 * r_bar * norm / chi_value**2
    radicand_weyl = r_weyl * norm

    def _value(radicand: float) -> float | None:
        if radicand < 0.0:
            return None
        return -constants.hbar * math.sqrt(radicand)

    result = QuantumLagrangian(
        radicand_curvature=radicand_curvature,
        radicand_weyl=radicand_weyl,
        value_curvature=_value(radicand_curvature),
        value_weyl=_value(radicand_weyl),
    )
    logger.debug(
        "EVENT=QUANTUM_LAGRANGIAN RADICAND_CURVATURE=%.12g RADICAND_WEYL=%.12g RATIO=%.12g",
        radicand_curvature,
        radicand_weyl,
        result.ratio,
    )
    return result


def kaluza_klein_shift(constants: PhysicalConstants, f2: float, chi: float = 1.0) -> float:
    """Curvature shift -(e a chi / c hbar gamma)^2 (1/2 F^2) that absorbs the F^2 term."""

    gamma = math.sqrt(constants.gamma2)
    scale = constants.e * constants.a * chi / (constants.c * constants.hbar * gamma)
    return -(scale**2) * f2
