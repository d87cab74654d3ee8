"""Lagrangians, the Hamilton-Jacobi velocity field and trajectory integration.

Trajectories follow dq^i/dsigma = chi^2 g^{ij}(d_j S - (e/c) A_j) with a fixed-step
fourth-order Runge-Kutta scheme.  Proper time accumulates from the Minkowski block
and the center of energy obeys dy = e_0(theta) dtau, integrated in the same
stages as the configuration point.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence, Union

import numpy as np

from . import jets
from .constants import DEFAULT_CONSTANTS, PhysicalConstants
from .errors import DomainError, ImaginaryRadicand, NonpositiveWeylFactor, TooShort, ZeroAmplitude
from .fields import FieldConfig, em_lift
from .geometry import MINKOWSKI, ConfigPoint, MetricField, config_metric, coords, field_derivatives
from .lorentz import G, invariant_frame, lorentz_from_euler
from .wave import PotentialPair, chi_from_psi, potentials_from_psi, synchronous_volume_diagnostic

logger = logging.getLogger(__name__)

__all__ = [
    "CSV_COLUMNS",
    "ZITTERBEWEGUNG_MIN_SAMPLES",
    "TrajectoryState",
    "Trajectory",
    "ClassicalLagrangian",
    "ConvergenceStudy",
    "ZitterbewegungReport",
    "lagrangian_classical",
    "velocity_field",
    "integrate_trajectory",
    "integrate_bundle",
    "convergence_order",
    "fourleg_drift",
    "zitterbewegung_report",
]

CSV_COLUMNS: tuple[str, ...] = (
    ("sigma", "tau")
    + tuple(f"x{mu}" for mu in range(4))
    + tuple(f"theta{alpha}" for alpha in range(1, 7))
    + tuple(f"y{mu}" for mu in range(4))
)
ZITTERBEWEGUNG_MIN_SAMPLES = 100

Source = Union[PotentialPair, Callable[[Any], Any]]


@dataclass(frozen=True, slots=True)
class TrajectoryState:
    sigma: float
    q: ConfigPoint
    tau: float
    y: tuple[float, float, float, float]

    def as_row(self) -> tuple[float, ...]:
        return (self.sigma, self.tau) + self.q.x + self.q.theta + self.y


@dataclass(frozen=True)
class Trajectory:
    """Samples of one integrated path with the integrator metadata."""

    samples: tuple[TrajectoryState, ...]
    step: float
    order: int = 4
    seed: int | None = None
    truncated: str | None = None
    metadata: dict[str, Any] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return len(self.samples)

    def as_array(self) -> np.ndarray:
        """Rows ordered like :data:`CSV_COLUMNS`."""

        if not self.samples:
            return np.zeros((0, len(CSV_COLUMNS)))
        return np.array([state.as_row() for state in self.samples], dtype=float)

    @property
    def sigmas(self) -> np.ndarray:
        return self.as_array()[:, 0]

    @property
    def taus(self) -> np.ndarray:
        return self.as_array()[:, 1]

    @property
    def positions(self) -> np.ndarray:
        return self.as_array()[:, 2:6]

    @property
    def angles(self) -> np.ndarray:
        return self.as_array()[:, 6:12]

    @property
    def centers(self) -> np.ndarray:
        return self.as_array()[:, 12:16]


@dataclass(frozen=True, slots=True)
class ClassicalLagrangian:
    """L0 from the fourleg form and from the configuration metric, plus the coupling term."""

    frame_form: float
    metric_form: float
    electromagnetic: float

    @property
    def total(self) -> float:
        return self.metric_form + self.electromagnetic

    @property
    def disagreement(self) -> float:
        return abs(self.frame_form - self.metric_form) / max(abs(self.metric_form), 1.0)


@dataclass(frozen=True, slots=True)
class ConvergenceStudy:
    steps: tuple[int, int, int]
    errors: tuple[float, float]

    @property
    def order(self) -> float:
        coarse, fine = self.errors
        if fine <= 0.0 or coarse <= 0.0:
            return math.inf
        return math.log2(coarse / fine)


@dataclass(frozen=True)
class ZitterbewegungReport:
    """Separation of the center of mass from the center of energy along a path."""

    samples: int
    amplitude: float
    max_deviation: float
    frequency: float
    reference_frequency: float
    volume_series: tuple[float, ...] = ()

    def as_dict(self) -> dict[str, Any]:
        return {
            "samples": self.samples,
            "amplitude": self.amplitude,
            "max_deviation": self.max_deviation,
            "frequency": self.frequency,
            "reference_frequency": self.reference_frequency,
            "volume_series": list(self.volume_series),
        }


def lagrangian_classical(
    constants: PhysicalConstants,
    q: Any,
    qdot: Sequence[float],
    fields: FieldConfig | None = None,
    *,
    metric: MetricField | None = None,
    sign: int = 1,
) -> ClassicalLagrangian:
    """-m c sqrt(-g_ij qdot qdot) - (e/c) A_i qdot^i, evaluated two ways for L0.

    The fourleg form uses omega = sum_alpha thetadot^alpha Omega_alpha and
    -eta xdot xdot - sign a^2 omega_{mu nu} omega^{mu nu}.
    """

    point = np.asarray(coords(q), dtype=float)
    velocity = np.asarray(qdot, dtype=float)
    if velocity.shape != (10,):
        raise DomainError("qdot must have ten components")
    metric = metric or config_metric(constants, sign)
    fields = fields or FieldConfig.none()

    xdot, thetadot = velocity[:4], velocity[4:]
    omega = np.einsum("a,aij->ij", thetadot, invariant_frame(point[4:]).omega)
    contracted = float(np.sum((G @ omega) * (omega @ G)))
    frame_radicand = -float(xdot @ MINKOWSKI @ xdot) - sign * constants.a**2 * contracted

    g = np.asarray(metric(point), dtype=float)
    metric_radicand = -float(velocity @ g @ velocity)
    for radicand in (frame_radicand, metric_radicand):
        if radicand < -1e-12 * max(1.0, abs(metric_radicand)):
            raise ImaginaryRadicand(radicand)
    mc = constants.m * constants.c
    lift = np.zeros(10) if fields.kind == "none" else np.real(em_lift(fields, point, constants))
    return ClassicalLagrangian(
        frame_form=-mc * math.sqrt(max(frame_radicand, 0.0)),
        metric_form=-mc * math.sqrt(max(metric_radicand, 0.0)),
        electromagnetic=-(constants.e / constants.c) * float(lift @ velocity),
    )


def _source_gradient(
    source: Source, point: np.ndarray, constants: PhysicalConstants
) -> tuple[float, np.ndarray]:
    if isinstance(source, PotentialPair):
        chi_value = float(np.real(jets.value(source.chi(point))))
        if not chi_value > 0.0:
            raise NonpositiveWeylFactor(chi_value)
        _, grad = field_derivatives(source.S, point, order=1)
        return chi_value, np.real(np.asarray(grad, dtype=complex))
    recovered = potentials_from_psi(source, point, constants)
    return recovered.chi, recovered.grad_s


def velocity_field(
    source: Source,
    q: Any,
    fields: FieldConfig | None = None,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    metric: MetricField | None = None,
    *,
    sign: int = 1,
) -> np.ndarray:
    """chi^2 g^{ij}(d_j S - (e/c) A_j) from a (S, chi) pair or from psi."""

    point = np.asarray(coords(q), dtype=float)
    metric = metric or config_metric(constants, sign)
    fields = fields or FieldConfig.none()
    chi_value, grad_s = _source_gradient(source, point, constants)
    momentum = grad_s
    if fields.kind != "none":
        lift = np.real(em_lift(fields, point, constants))
        momentum = momentum - (constants.e / constants.c) * lift
    g = np.asarray(metric(point), dtype=float)
    return chi_value**2 * np.linalg.solve(g, momentum)


def _empty_trajectory(seed: int | None, reason: str | None = None) -> Trajectory:
    return Trajectory(samples=(), step=0.0, seed=seed, truncated=reason)


def _state_from_vector(sigma: float, state: np.ndarray) -> TrajectoryState:
    return TrajectoryState(
        sigma=float(sigma),
        q=ConfigPoint.from_array(state[:10]),
        tau=float(state[10]),
        y=tuple(float(v) for v in state[11:15]),
    )


def integrate_trajectory(
    start: ConfigPoint | Sequence[float],
    source: Source,
    span: float,
    steps: int,
    fields: FieldConfig | None = None,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    metric: MetricField | None = None,
    *,
    sign: int = 1,
    velocity_scale: float = 1.0,
    seed: int | None = None,
) -> Trajectory:
    """Fixed-step RK4 from *start* over sigma in [0, span]; stops cleanly at psi nodes."""

    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 0:
        raise DomainError(f"steps must be a non-negative integer, got {steps!r}")
    if steps == 0:
        logger.warning("EVENT=TRAJECTORY_EMPTY REASON=zero-steps")
        return _empty_trajectory(seed)
    if not span > 0.0 or not math.isfinite(span):
        raise DomainError(f"span must be positive and finite, got {span!r}")
    if not velocity_scale > 0.0:
        raise DomainError("velocity_scale must be positive")

    metric = metric or config_metric(constants, sign)
    fields = fields or FieldConfig.none()
    origin = ConfigPoint.from_array(coords(start))
    h = span / steps

    def rhs(state: np.ndarray) -> np.ndarray:
        q = state[:10]
        v = velocity_scale * velocity_field(source, q, fields, constants, metric, sign=sign)
        xdot = v[:4]
        dtau = math.sqrt(max(0.0, -float(xdot @ MINKOWSKI @ xdot)))
        e0 = lorentz_from_euler(q[4:])[:, 0]
        return np.concatenate((v, [dtau], e0 * dtau))

    state = np.concatenate((origin.as_array(), [0.0], origin.as_array()[:4]))
    samples = [_state_from_vector(0.0, state)]
    truncated: str | None = None
    for index in range(1, steps + 1):
        try:
            k1 = rhs(state)
            k2 = rhs(state + 0.5 * h * k1)
            k3 = rhs(state + 0.5 * h * k2)
            k4 = rhs(state + h * k3)
        except ZeroAmplitude as exc:
            truncated = f"zero-amplitude at sigma={(index - 1) * h!r}"
            logger.warning("EVENT=TRAJECTORY_TRUNCATED REASON=%s DETAIL=%s", truncated, exc)
            break
        state = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        samples.append(_state_from_vector(index * h, state))

    logger.debug(
        "EVENT=TRAJECTORY_DONE SAMPLES=%d STEP=%.6g TRUNCATED=%s",
        len(samples),
        h,
        truncated is not None,
    )
    return Trajectory(samples=tuple(samples), step=h, seed=seed, truncated=truncated)


def integrate_bundle(
    starts: Sequence[ConfigPoint | Sequence[float]],
    source: Source,
    span: float,
    steps: int,
    fields: FieldConfig | None = None,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    metric: MetricField | None = None,
    *,
    sign: int = 1,
    workers: int = 1,
    seed: int | None = None,
) -> list[Trajectory]:
    """Integrate one trajectory per start point; results keep the order of *starts*."""

    metric = metric or config_metric(constants, sign)

    def run(start: Any) -> Trajectory:
        return integrate_trajectory(
            start, source, span, steps, fields, constants, metric, sign=sign, seed=seed
        )

    if workers <= 1 or len(starts) <= 1:
        return [run(start) for start in starts]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, starts))


def _endpoint(trajectory: Trajectory) -> np.ndarray:
    last = trajectory.samples[-1]
    return np.concatenate((last.q.as_array(), [last.tau], last.y))


def convergence_order(
    start: ConfigPoint | Sequence[float],
    source: Source,
    span: float,
    steps: int,
    fields: FieldConfig | None = None,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    metric: MetricField | None = None,
    *,
    sign: int = 1,
) -> ConvergenceStudy:
    """Endpoint differences for steps, 2 steps and 4 steps; order = log2(e_h / e_{h/2})."""

    counts = (steps, 2 * steps, 4 * steps)
    runs = [
        integrate_trajectory(start, source, span, count, fields, constants, metric, sign=sign)
        for count in counts
    ]
    for run in runs:
        if run.truncated:
            raise ZeroAmplitude(0.0, run.samples[-1].q.as_array())
    ends = [_endpoint(run) for run in runs]
    errors = (
        float(np.abs(ends[0] - ends[1]).max()),
        float(np.abs(ends[1] - ends[2]).max()),
    )
    study = ConvergenceStudy(steps=counts, errors=errors)
    logger.debug("EVENT=CONVERGENCE ERRORS=%r ORDER=%.4g", errors, study.order)
    return study


def fourleg_drift(trajectory: Trajectory) -> float:
    """max over samples of |Lambda^T G Lambda - G| for the fourleg along the path."""

    drift = 0.0
    for state in trajectory.samples:
        matrix = lorentz_from_euler(state.q.theta)
        drift = max(drift, float(np.abs(matrix.T @ G @ matrix - G).max()))
    return drift


def _detrend(values: np.ndarray) -> np.ndarray:
    grid = np.arange(values.shape[0], dtype=float)
    design = np.stack((np.ones_like(grid), grid), axis=1)
    coefficients, *_ = np.linalg.lstsq(design, values, rcond=None)
    return values - design @ coefficients


def zitterbewegung_report(
    trajectory: Trajectory,
    constants: PhysicalConstants = DEFAULT_CONSTANTS,
    *,
    source: Source | None = None,
    metric: MetricField | None = None,
    diagnostic_points: int = 0,
) -> ZitterbewegungReport:
    """Amplitude and dominant frequency of x - y; optional Rbar sqrt(gbar) along the path."""

    count = len(trajectory)
    if count < ZITTERBEWEGUNG_MIN_SAMPLES:
        raise TooShort(count, ZITTERBEWEGUNG_MIN_SAMPLES)
    difference = trajectory.positions[:, 1:] - trajectory.centers[:, 1:]
    max_deviation = float(np.linalg.norm(difference, axis=1).max())
    residual = _detrend(difference)
    amplitude = float(np.linalg.norm(residual, axis=1).max())

    dominant = residual[:, int(np.argmax(np.abs(residual).max(axis=0)))]
    spectrum = np.abs(np.fft.rfft(dominant))
    spectrum[0] = 0.0
    peak = int(np.argmax(spectrum))
    tau_span = float(trajectory.taus[-1] - trajectory.taus[0])
    sigma_span = float(trajectory.sigmas[-1] - trajectory.sigmas[0])
    cycles_per_sigma = peak / sigma_span if sigma_span > 0.0 else 0.0
    frequency = 0.0
    if tau_span > 0.0 and amplitude > 0.0:
        frequency = 2.0 * math.pi * cycles_per_sigma * sigma_span / tau_span

    volume: tuple[float, ...] = ()
    if diagnostic_points > 0 and source is not None:
        metric = metric or config_metric(constants)
        chi = source.chi if isinstance(source, PotentialPair) else chi_from_psi(source, constants)
        indices = np.linspace(0, count - 1, num=min(diagnostic_points, count)).astype(int)
        points = [trajectory.samples[i].q.as_array() for i in indices]
        volume = tuple(float(v) for v in synchronous_volume_diagnostic(points, chi, metric))

    report = ZitterbewegungReport(
        samples=count,
        amplitude=amplitude,
        max_deviation=max_deviation,
        frequency=frequency,
        reference_frequency=2.0 * constants.m * constants.c**2 / constants.hbar,
        volume_series=volume,
    )
    logger.info(
        "EVENT=ZITTERBEWEGUNG AMPLITUDE=%.6g FREQUENCY=%.6g REFERENCE=%.6g",
        report.amplitude,
        report.frequency,
        report.reference_frequency,
    )
    return report
