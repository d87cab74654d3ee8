"""Spinor mode expansion and the reduction of the ten-dimensional wave equation.

A coefficient spinor psi(x) of label (u, v) becomes the scalar
``psi_uv(q) = D^{(u,v)}(Lambda(theta)^-1)[0, :] @ psi(x)`` on the configuration
space.  For uniform fields the ten-dimensional operator acting on psi_uv equals
row 0 of D(Lambda^-1) applied to

    [kinetic_x + hbar^2 gamma^2 R] psi(x) + c_casimir * Delta_J psi(x)

with ``c_casimir = 1 / (2 sign)`` for the trace-form group metric.  The Dirac
field stacks an undotted (0, 1/2) block over a dotted one.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from . import jets
from .constants import PRINTED_CURVATURE_TIMES_A2, PhysicalConstants, a_from_mass
from .errors import DomainError, OffShellMomentum
from .fields import FieldConfig, em_lift
from .geometry import (
    MINKOWSKI,
    MetricField,
    coords,
    curvature,
    field_derivatives,
    laplace_beltrami,
    scalar_curvature,
    scalar_curvature_closed_form,
)
from .lorentz import PAULI, SpinorRep, casimir, rep_generators, rep_matrix
from .wave import WaveField, wave_residual

logger = logging.getLogger(__name__)

__all__ = [
    "SPINOR_KINDS",
    "LOWER_INDEX",
    "DIRAC_BLOCK",
    "SIGMA_BLOCK",
    "ALPHA_BLOCK",
    "SpinorField",
    "DiracField",
    "DiracPlaneWave",
    "ReductionSample",
    "CalibrationReport",
    "em_lift",
    "a_from_mass",
    "mode_expand",
    "mode_field",
    "delta_j",
    "kinetic_operator",
    "coefficient_residual",
    "squared_dirac_residual",
    "dirac_first_order_operator",
    "dirac_plane_wave",
    "on_shell_momentum",
    "plane_wave_spinor_field",
    "reduction_check",
    "reduction_calibration",
    "casimir_table",
]

SPINOR_KINDS: tuple[str, ...] = ("undotted", "dotted")
LOWER_INDEX = 0
DIRAC_BLOCK = SpinorRep(0, 1)

_ZERO2 = np.zeros((2, 2), dtype=complex)
SIGMA_BLOCK: tuple[np.ndarray, ...] = tuple(
    np.block([[PAULI[k], _ZERO2], [_ZERO2, PAULI[k]]]) for k in range(3)
)
ALPHA_BLOCK: tuple[np.ndarray, ...] = tuple(
    np.block([[PAULI[k], _ZERO2], [_ZERO2, -PAULI[k]]]) for k in range(3)
)


def _default_casimir_factor(sign: int) -> float:
    return 1.0 / (2.0 * sign)


@dataclass(frozen=True)
class SpinorField:
    """Coefficient spinor psi(x) of a fixed label, dotted or undotted."""

    label: SpinorRep
    kind: str
    psi_x: Callable[[Any], Any]

    def __post_init__(self) -> None:
        if not isinstance(self.label, SpinorRep):
            object.__setattr__(self, "label", SpinorRep(*self.label))
        if self.kind not in SPINOR_KINDS:
            raise DomainError(f"spinor kind must be one of {', '.join(SPINOR_KINDS)}")

    @property
    def dotted(self) -> bool:
        return self.kind == "dotted"

    def __call__(self, x: Any) -> Any:
        values = self.psi_x(x)
        if np.shape(jets.value(values)) != (self.label.dim,):
            raise DomainError(
                f"spinor of label {self.label} needs {self.label.dim} components, "
                f"got shape {np.shape(jets.value(values))}"
            )
        return values


@dataclass(frozen=True)
class DiracField:
    """Four components stacked as (undotted block; dotted block)."""

    psi_d: Callable[[Any], Any]

    def __call__(self, x: Any) -> Any:
        values = self.psi_d(x)
        if np.shape(jets.value(values)) != (4,):
            raise DomainError("a Dirac field has four components")
        return values

    def upper(self) -> SpinorField:
        return SpinorField(DIRAC_BLOCK, "undotted", lambda x: self(x)[0:2])

    def lower(self) -> SpinorField:
        return SpinorField(DIRAC_BLOCK, "dotted", lambda x: self(x)[2:4])


@dataclass(frozen=True)
class DiracPlaneWave:
    """Positive-energy plane wave u(p) exp(i p_mu x^mu / hbar) in the spinor basis."""

    momentum: np.ndarray
    spinor: np.ndarray
    mass: float
    hbar: float
    c: float

    @property
    def field(self) -> DiracField:
        spinor = self.spinor
        phase = _plane_wave_phase(self.momentum, self.hbar)
        return DiracField(psi_d=lambda x: spinor * phase(x))

    def first_order_residual(self) -> float:
        """max |D(p) u| relative to max(|u| m c, tiny) for the first-order operator."""

        operator = dirac_first_order_operator(self.momentum, self.mass, self.c)
        scale = max(float(np.linalg.norm(self.spinor)) * self.mass * self.c, np.finfo(float).tiny)
        return float(np.abs(operator @ self.spinor).max() / scale)


@dataclass(frozen=True, slots=True)
class ReductionSample:
    """Ten-dimensional wave residual of a mode expansion against its reduced prediction."""

    ten_d: complex
    predicted: complex

    @property
    def residual(self) -> float:
        return abs(self.ten_d - self.predicted) / max(abs(self.ten_d), abs(self.predicted), 1e-300)


@dataclass(frozen=True, slots=True)
class CalibrationReport:
    """Measured reduction coefficients next to the printed constants."""

    a: float
    c_casimir: float
    casimir_spread: float
    eigen_residual: float
    c_curvature: float
    curvature_spread: float
    mass_coefficient_measured: float
    mass_coefficient_predicted: float
    points: int
    printed_casimir: float = 1.0
    printed_curvature_a2: float = PRINTED_CURVATURE_TIMES_A2

    @property
    def curvature_a2(self) -> float:
        return self.c_curvature * self.a * self.a

    @property
    def curvature_ratio(self) -> float:
        return self.curvature_a2 / self.printed_curvature_a2

    @property
    def casimir_ratio(self) -> float:
        return self.c_casimir / self.printed_casimir

    @property
    def closure(self) -> float:
        scale = max(abs(self.mass_coefficient_measured), 1e-300)
        return abs(self.mass_coefficient_measured - self.mass_coefficient_predicted) / scale

    def as_dict(self) -> dict[str, float | int]:
        return {
            "a": self.a,
            "c_casimir": self.c_casimir,
            "c_casimir_printed": self.printed_casimir,
            "c_casimir_ratio": self.casimir_ratio,
            "casimir_spread": self.casimir_spread,
            "casimir_eigen_residual": self.eigen_residual,
            "c_curvature": self.c_curvature,
            "curvature_a2": self.curvature_a2,
            "curvature_a2_printed": self.printed_curvature_a2,
            "curvature_ratio": self.curvature_ratio,
            "curvature_spread": self.curvature_spread,
            "mass_coefficient_measured": self.mass_coefficient_measured,
            "mass_coefficient_predicted": self.mass_coefficient_predicted,
            "closure": self.closure,
            "points": self.points,
        }


# -- mode expansion -------------------------------------------------------------


def _mode_row(label: SpinorRep, theta: Any, dotted: bool) -> Any:
    return rep_matrix(label, theta, inverse=True, dotted=dotted)[LOWER_INDEX]


def mode_expand(spinor: SpinorField | DiracField, q: Any) -> Any:
    """Row LOWER_INDEX of D(Lambda^-1) contracted with the coefficient spinor(s)."""

    point = coords(q)
    x, theta = point[:4], point[4:]
    if isinstance(spinor, DiracField):
        return mode_expand(spinor.upper(), point) + mode_expand(spinor.lower(), point)
    return _mode_row(spinor.label, theta, spinor.dotted) @ spinor(x)


def mode_field(spinor: SpinorField | DiracField) -> WaveField:
    name = "dirac" if isinstance(spinor, DiracField) else f"{spinor.label} {spinor.kind}"
    return WaveField(psi=lambda q: mode_expand(spinor, q), name=f"mode {name}")


# -- reduced operators ---------------------------------------------------------


def delta_j(
    label: Any,
    kind: str,
    E: Sequence[float],
    H: Sequence[float],
    constants: PhysicalConstants,
) -> np.ndarray:
    """[(hbar/a) J - kappa H]^2 - [(hbar/a) K - kappa E]^2 with kappa = (e/c) a^(p-1)."""

    label = label if isinstance(label, SpinorRep) else SpinorRep(*label)
    if kind not in SPINOR_KINDS:
        raise DomainError(f"spinor kind must be one of {', '.join(SPINOR_KINDS)}")
    J, K = rep_generators(label, dotted=kind == "dotted")
    E = np.asarray(E, dtype=float)
    H = np.asarray(H, dtype=float)
    scale = constants.hbar / constants.a
    kappa = constants.coupling
    eye = np.eye(label.dim)
    rotation = [scale * J[k] - kappa * H[k] * eye for k in range(3)]
    boost = [scale * K[k] - kappa * E[k] * eye for k in range(3)]
    return sum(M @ M for M in rotation) - sum(M @ M for M in boost)


def kinetic_operator(
    psi_x: Callable[[Any], Any],
    x: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
) -> np.ndarray:
    """eta^{mu nu}(-i hbar d_mu - (e/c) A_mu)(-i hbar d_nu - (e/c) A_nu) on a spinor of x."""

    point = np.asarray(jets.value(coords(x)), dtype=float)
    val, grad, hess = field_derivatives(psi_x, point, order=2)
    val = np.asarray(val, dtype=complex)
    grad = np.asarray(grad, dtype=complex)
    hess = np.asarray(hess, dtype=complex)
    hbar = constants.hbar
    kappa0 = constants.e / constants.c
    result = -(hbar**2) * np.einsum("mn,...mn->...", MINKOWSKI, hess)
    if fields.kind != "none":
        a_low, a_grad = field_derivatives(fields.potential, point, order=1)
        a_low = np.real(np.asarray(a_low, dtype=complex))
        a_grad = np.real(np.asarray(a_grad, dtype=complex))
        a_up = MINKOWSKI @ a_low
        div_a = float(np.einsum("mn,nm->", MINKOWSKI, a_grad))
        result = (
            result
            + 1j * hbar * kappa0 * div_a * val
            + 2j * hbar * kappa0 * (grad @ a_up)
            + kappa0**2 * float(a_low @ a_up) * val
        )
    return result


def coefficient_residual(
    spinor: SpinorField,
    x: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    *,
    curvature: float | None = None,
    c_casimir: float | None = None,
    sign: int = 1,
) -> np.ndarray:
    """[kinetic_x + hbar^2 gamma^2 R] psi(x) + c_casimir Delta_J psi(x).

    ``curvature`` defaults to the closed-form configuration-space value and
    ``c_casimir`` to the factor the trace-form group metric produces.
    """

    point = np.asarray(jets.value(coords(x)), dtype=float)
    if curvature is None:
        curvature = scalar_curvature_closed_form(constants, sign)
    if c_casimir is None:
        c_casimir = _default_casimir_factor(sign)
    E, H = fields.fields_at(point)
    value = np.asarray(spinor(point), dtype=complex)
    mass_term = constants.hbar**2 * constants.gamma2 * curvature * value
    spin_term = c_casimir * (delta_j(spinor.label, spinor.kind, E, H, constants) @ value)
    return kinetic_operator(spinor, point, fields, constants) + mass_term + spin_term


def squared_dirac_residual(
    dirac: DiracField,
    x: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    *,
    include_f2_term: bool = True,
) -> np.ndarray:
    """Kinetic part + mass term - (e hbar/c)(Sigma.H - i alpha.E) [+ (e a/c)^2 (H^2 - E^2)]."""

    point = np.asarray(jets.value(coords(x)), dtype=float)
    E, H = fields.fields_at(point)
    value = np.asarray(dirac(point), dtype=complex)
    hbar, a = constants.hbar, constants.a
    mass = 1.5 * hbar**2 / a**2 * (1.0 + 4.0 * constants.gamma2)
    spin_coupling = sum(H[k] * SIGMA_BLOCK[k] - 1j * E[k] * ALPHA_BLOCK[k] for k in range(3))
    result = (
        kinetic_operator(dirac, point, fields, constants)
        + mass * value
        - (constants.e * hbar / constants.c) * (spin_coupling @ value)
    )
    if include_f2_term:
        result = result + (constants.e * a / constants.c) ** 2 * float(H @ H - E @ E) * value
    return result


# -- plane waves ---------------------------------------------------------------


def on_shell_momentum(p3: Sequence[float], m: float, c: float = 1.0) -> np.ndarray:
    """Contravariant four-momentum (sqrt(m^2 c^2 + |p|^2), p)."""

    p3 = np.asarray(p3, dtype=float)
    return np.concatenate(([float(np.sqrt((m * c) ** 2 + p3 @ p3))], p3))


def dirac_first_order_operator(p: Sequence[float], m: float, c: float = 1.0) -> np.ndarray:
    """[[-mc, p0 - sigma.p], [p0 + sigma.p, -mc]] for contravariant p."""

    p = np.asarray(p, dtype=float)
    sigma_p = sum(p[k + 1] * PAULI[k] for k in range(3))
    eye = np.eye(2)
    return np.block(
        [[-m * c * eye, p[0] * eye - sigma_p], [p[0] * eye + sigma_p, -m * c * eye]]
    )


def _plane_wave_phase(p: np.ndarray, hbar: float) -> Callable[[Any], Any]:
    p_cov = MINKOWSKI @ p

    def phase(x: Any) -> Any:
        return jets.exp((p_cov @ x) * (1j / hbar))

    return phase


def dirac_plane_wave(
    p: Sequence[float],
    spin_state: Sequence[complex],
    m: float,
    constants: PhysicalConstants,
    *,
    require_on_shell: bool = True,
    shell_tolerance: float = 1e-12,
) -> DiracPlaneWave:
    """u = ((p0 - sigma.p + mc) xi, (p0 + sigma.p + mc) xi) / sqrt(2 (p0 + mc))."""

    p = np.asarray(p, dtype=float)
    if p.shape != (4,) or not np.all(np.isfinite(p)):
        raise DomainError("four-momentum must be four finite numbers")
    c = constants.c
    shell = float(p @ MINKOWSKI @ p) + (m * c) ** 2
    if require_on_shell and abs(shell) > shell_tolerance * max((m * c) ** 2, 1.0):
        raise OffShellMomentum(shell)
    if not p[0] + m * c > 0.0:
        raise DomainError("plane waves need positive energy")
    xi = np.asarray(spin_state, dtype=complex)
    if xi.shape != (2,) or not np.linalg.norm(xi) > 0.0:
        raise DomainError("spin state must be a nonzero two-component vector")
    xi = xi / np.linalg.norm(xi)
    sigma_p = sum(p[k + 1] * PAULI[k] for k in range(3))
    eye = np.eye(2)
    norm = np.sqrt(2.0 * (p[0] + m * c))
    spinor = np.concatenate(
        (((p[0] + m * c) * eye - sigma_p) @ xi, ((p[0] + m * c) * eye + sigma_p) @ xi)
    ) / norm
    return DiracPlaneWave(momentum=p, spinor=spinor, mass=float(m), hbar=constants.hbar, c=c)


def plane_wave_spinor_field(
    label: Any,
    kind: str,
    p: Sequence[float],
    amplitude: Sequence[complex],
    constants: PhysicalConstants,
) -> SpinorField:
    """Constant spinor times exp(i p_mu x^mu / hbar); p need not be on any shell."""

    label = label if isinstance(label, SpinorRep) else SpinorRep(*label)
    u = np.asarray(amplitude, dtype=complex)
    phase = _plane_wave_phase(np.asarray(p, dtype=float), constants.hbar)
    return SpinorField(label, kind, lambda x: u * phase(x))


# -- reduction checks ----------------------------------------------------------


def reduction_check(
    spinor: SpinorField | DiracField,
    q: Any,
    fields: FieldConfig,
    constants: PhysicalConstants,
    metric: MetricField,
    *,
    sign: int = 1,
) -> ReductionSample:
    """Compare the ten-dimensional residual of the mode expansion with the reduced prediction."""

    if not fields.is_uniform:
        logger.warning("EVENT=REDUCTION_NONUNIFORM KIND=%s", fields.kind)
    point = np.asarray(coords(q), dtype=float)
    x, theta = point[:4], point[4:]
    scalar = scalar_curvature(metric, point)
    ten_d = wave_residual(mode_field(spinor), point, fields, constants, metric)
    blocks = [spinor.upper(), spinor.lower()] if isinstance(spinor, DiracField) else [spinor]
    predicted = 0.0j
    for block in blocks:
        reduced = coefficient_residual(
            block,
            x,
            fields,
            constants,
            curvature=scalar,
            c_casimir=_default_casimir_factor(sign),
        )
        predicted += complex(_mode_row(block.label, theta, block.dotted) @ reduced)
    return ReductionSample(ten_d=complex(ten_d), predicted=predicted)


def casimir_table(*, dotted: bool = False) -> dict[str, float]:
    """Casimir value J.J - K.K for every supported label, keyed by '(u,v)'."""

    table: dict[str, float] = {}
    for two_u in range(4):
        for two_v in range(4):
            rep = SpinorRep(two_u, two_v)
            table[str(rep)] = float(np.real(np.trace(casimir(rep, dotted=dotted)))) / rep.dim
    return table


def reduction_calibration(
    constants: PhysicalConstants,
    metric: MetricField,
    points: Sequence[Any],
    *,
    spinor: Sequence[complex] = (1.0, 0.5),
    sign: int = 1,
) -> CalibrationReport:
    """Least-squares reduction constants over *points* (ten-dimensional arrays).

    c_casimir solves -hbar^2 Delta_group r = c (hbar/a)^2 C r for the rows of
    D^{(0,1/2)}(Lambda^-1). c_curvature is measured from the coordinate Riemann
    tensor at each point, not taken from the closed form. The mass coefficient
    is measured from the ten-dimensional residual of a constant (0, 1/2) spinor
    with no fields.
    """

    hbar, a = constants.hbar, constants.a
    label = DIRAC_BLOCK
    casimir_value = label.casimir_value
    coefficient = np.asarray(spinor, dtype=complex)
    free = FieldConfig.none()

    def group_matrix(q: Any) -> Any:
        return rep_matrix(label, coords(q)[4:], inverse=True)

    constant_spinor = SpinorField(label, "undotted", lambda x: coefficient)
    mode = mode_field(constant_spinor)

    c_values: list[float] = []
    eigen_residuals: list[float] = []
    curvatures: list[float] = []
    numerators = 0.0j
    denominators = 0.0
    for q in points:
        point = np.asarray(coords(q), dtype=float)
        f = np.asarray(group_matrix(point), dtype=complex)
        lap = np.asarray(laplace_beltrami(metric, group_matrix, point))
        operator = -(hbar**2) * lap
        scale = (hbar / a) ** 2 * casimir_value
        c_point = float(np.real(np.vdot(f, operator)) / (np.vdot(f, f).real * scale))
        c_values.append(c_point)
        spread = np.abs(operator - c_point * scale * f).max()
        eigen_residuals.append(float(spread / max(np.abs(operator).max(), 1e-300)))
        curvatures.append(curvature(metric, point).scalar)
        value = complex(mode(point))
        w = wave_residual(mode, point, free, constants, metric)
        numerators += np.conj(value) * w
        denominators += abs(value) ** 2

    c_arr = np.asarray(c_values)
    r_arr = np.asarray(curvatures)
    c_mean = float(c_arr.mean())
    r_mean = float(r_arr.mean())
    measured = float(np.real(numerators / denominators))
    predicted = hbar**2 * constants.gamma2 * r_mean + (hbar / a) ** 2 * c_mean * casimir_value
    report = CalibrationReport(
        a=float(a),
        c_casimir=c_mean,
        casimir_spread=float((c_arr.max() - c_arr.min()) / max(abs(c_mean), 1e-300)),
        eigen_residual=float(max(eigen_residuals)),
        c_curvature=r_mean,
        curvature_spread=float((r_arr.max() - r_arr.min()) / max(abs(r_mean), 1e-300)),
        mass_coefficient_measured=measured,
        mass_coefficient_predicted=predicted,
        points=len(c_values),
    )
    logger.info(
        "EVENT=CURVATURE_CALIBRATED VALUE=%.12g R_A2=%.12g PRINTED=%g RATIO=%.6g",
        report.c_curvature,
        report.curvature_a2,
        report.printed_curvature_a2,
        report.curvature_ratio,
    )
    logger.info(
        "EVENT=CASIMIR_CALIBRATED VALUE=%.12g PRINTED=%g RATIO=%.6g SPREAD=%.3g",
        report.c_casimir,
        report.printed_casimir,
        report.casimir_ratio,
        report.casimir_spread,
    )
    if abs(report.curvature_ratio - 1.0) > 1e-6 or abs(report.casimir_ratio - 1.0) > 1e-6:
        logger.warning(
            "EVENT=PRINTED_CONSTANT_MISMATCH CURVATURE_RATIO=%.6g CASIMIR_RATIO=%.6g",
            report.curvature_ratio,
            report.casimir_ratio,
        )
    return report
