"""Verification suites run by ``spintop verify``.

Every check reduces to one number compared against a tolerance: upper-bound
checks report their largest residual, lower-bound checks report the shortfall
``bound - observed`` against a tolerance of zero.  Values compared with printed
constants go into the suite notes and never decide pass or fail.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .constants import PRINTED_CURVATURE_TIMES_A2, PhysicalConstants
from .dynamics import convergence_order, fourleg_drift, integrate_trajectory, zitterbewegung_report
from .fields import FieldConfig, field_strength, invariant_f2
from .geometry import (
    DEFAULT_FD_STEP,
    ConfigPoint,
    MetricField,
    config_metric,
    conformal_scale,
    curvature,
    laplace_beltrami,
    scalar_curvature_closed_form,
)
from .lorentz import (
    G,
    SpinorRep,
    casimir,
    compose_angles,
    conjugate_rep_matrix,
    group_metric,
    left_translation_jacobian,
    lorentz_from_euler,
    rep_matrix,
    rep_matrix_from_sl2c,
    sl2c_from_euler,
    vector_map,
)
from .samples import (
    plane_wave_psi,
    random_angles,
    random_chi,
    random_config_point,
    random_gauge,
    random_pair,
    rng_for,
    sphere_metric,
    sphere_y10,
)
from .spin import (
    DIRAC_BLOCK,
    DiracPlaneWave,
    coefficient_residual,
    dirac_plane_wave,
    mode_field,
    on_shell_momentum,
    plane_wave_spinor_field,
    reduction_calibration,
    reduction_check,
    squared_dirac_residual,
)
from .wave import (
    continuity_residual,
    current,
    current_divergence,
    madelung_decomposition,
    psi_from_potentials,
    wave_residual,
)
from .weyl import (
    WeylPotential,
    co_covariant_derivative,
    gauge_transform,
    kaluza_klein_shift,
    weyl_curvature_forms,
)

logger = logging.getLogger(__name__)

__all__ = [
    "SUITE_NAMES",
    "SUITES",
    "DEFAULT_TOLERANCES",
    "DEFAULT_SAMPLE_COUNTS",
    "CheckResult",
    "SuiteOutcome",
    "SuiteSettings",
    "SuiteRun",
    "run_suite",
    "run_suites",
]

SUITE_NAMES: tuple[str, ...] = (
    "lorentz",
    "curvature",
    "weyl-gauge",
    "madelung",
    "reduction",
    "dirac",
    "current",
    "trajectory-convergence",
)

DEFAULT_TOLERANCES: dict[str, float] = {
    "algebra": 1e-12,
    "representation": 1e-10,
    "curvature": 1e-8,
    "reduction": 1e-6,
    "finite_difference": 1e-5,
}

DEFAULT_SAMPLE_COUNTS: dict[str, int] = {
    "lorentz": 100,
    "curvature": 20,
    "weyl": 20,
    "madelung": 20,
    "reduction": 10,
    "trajectory_steps": 1000,
}

REP_LABELS: tuple[tuple[int, int], ...] = (
    (0, 1), (1, 0), (1, 1), (0, 2), (2, 1), (1, 3), (3, 3),
)
REDUCTION_LABELS: tuple[tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
UNIFORM_E = (0.1, -0.2, 0.05)
UNIFORM_H = (0.2, 0.1, -0.3)
SPHERE_RADIUS = 1.7
NEGATIVE_BOUND = 1e-3
NEGATIVE_MIN_SAMPLES = 20
OFF_SHELL_BOUND = 1e-3
CONVERGENCE_BOUND = 3.7
ZITTERBEWEGUNG_FACTOR = 10.0
NOISE_FLOOR = 1e-12
VOLUME_POINTS = 4
GROUP_LAW_SAMPLES = 20
TRANSLATION_SCALE = 0.3


@dataclass(frozen=True, slots=True)
class CheckResult:
    """One verification outcome; ``passed`` holds exactly when max_residual <= tolerance."""

    name: str
    max_residual: float
    tolerance: float
    samples: int
    passed: bool
    wall_time_ms: float = 0.0

    @classmethod
    def evaluate(
        cls, name: str, max_residual: float, tolerance: float, samples: int, started: float
    ) -> "CheckResult":
        residual = float(max_residual)
        passed = bool(math.isfinite(residual) and residual <= tolerance)
        elapsed = (time.perf_counter() - started) * 1000.0
        log = logger.info if passed else logger.warning
        log(
            "EVENT=CHECK NAME=%s STATUS=%s MAX_RESIDUAL=%.6g TOLERANCE=%.3g SAMPLES=%d",
            name,
            "pass" if passed else "fail",
            residual,
            tolerance,
            samples,
        )
        return cls(name, residual, float(tolerance), int(samples), passed, elapsed)


@dataclass(frozen=True)
class SuiteOutcome:
    name: str
    checks: tuple[CheckResult, ...]
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


@dataclass(frozen=True)
class SuiteSettings:
    """Everything a suite needs; built from the validated configuration."""

    constants: PhysicalConstants
    seed: int
    sign: int = 1
    fields: FieldConfig = field(default_factory=FieldConfig.none)
    tolerances: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    counts: Mapping[str, int] = field(default_factory=lambda: dict(DEFAULT_SAMPLE_COUNTS))
    negative_enabled: bool = True
    negative_gamma2: float = 0.25
    workers: int = 1
    fd_step: float = DEFAULT_FD_STEP

    def tolerance(self, check: str, category: str) -> float:
        """Per-check override first, then the category value."""

        if check in self.tolerances:
            return float(self.tolerances[check])
        return float(self.tolerances.get(category, DEFAULT_TOLERANCES[category]))

    def count(self, key: str) -> int:
        return int(self.counts.get(key, DEFAULT_SAMPLE_COUNTS[key]))

    @property
    def metric(self) -> MetricField:
        return config_metric(self.constants, self.sign)


@dataclass(frozen=True)
class SuiteRun:
    outcomes: tuple[SuiteOutcome, ...]

    @property
    def checks(self) -> list[CheckResult]:
        return [check for outcome in self.outcomes for check in outcome.checks]

    @property
    def passed(self) -> bool:
        return all(outcome.passed for outcome in self.outcomes)


class _Checks:
    """Collects the checks of one suite and times each from the previous one."""

    def __init__(self, settings: SuiteSettings) -> None:
        self.settings = settings
        self.results: list[CheckResult] = []
        self.started = time.perf_counter()

    def restart(self) -> None:
        self.started = time.perf_counter()

    def upper(self, name: str, category: str, residual: float, samples: int) -> None:
        tolerance = self.settings.tolerance(name, category)
        self.results.append(CheckResult.evaluate(name, residual, tolerance, samples, self.started))
        self.restart()

    def lower(self, name: str, observed: float, bound: float, samples: int) -> None:
        self.results.append(
            CheckResult.evaluate(name, bound - observed, 0.0, samples, self.started)
        )
        self.restart()

    def outcome(self, suite: str, notes: dict[str, Any] | None = None) -> SuiteOutcome:
        return SuiteOutcome(suite, tuple(self.results), notes or {})


def _relative(value: Any, scale: Any) -> float:
    return float(np.abs(value).max() / max(float(np.abs(scale).max()), 1.0))


def _random_spinor(rng: np.random.Generator, dim: int) -> np.ndarray:
    return rng.normal(size=dim) + 1j * rng.normal(size=dim)


def _random_momentum(rng: np.random.Generator) -> np.ndarray:
    return np.concatenate(([rng.uniform(0.5, 1.5)], rng.uniform(-0.5, 0.5, size=3)))


# -- lorentz ------------------------------------------------------------------


def _lorentz_suite(settings: SuiteSettings) -> SuiteOutcome:
    rng = rng_for(settings.seed, 1)
    count = settings.count("lorentz")
    thetas = [random_angles(rng) for _ in range(count)]
    checks = _Checks(settings)

    preservation = 0.0
    for theta in thetas:
        matrix = lorentz_from_euler(theta)
        preservation = max(preservation, float(np.abs(matrix.T @ G @ matrix - G).max()))
    checks.upper("lorentz.metric_preservation", "algebra", preservation, count)

    covering = 0.0
    for theta in thetas:
        difference = vector_map(sl2c_from_euler(theta)) - lorentz_from_euler(theta)
        covering = max(covering, float(np.abs(difference).max()))
    checks.upper("lorentz.sl2c_vector_map", "algebra", covering, count)

    conjugate = oracle = 0.0
    for theta in thetas:
        A = sl2c_from_euler(theta)
        for label in REP_LABELS:
            rep = SpinorRep(*label)
            D = rep_matrix(rep, theta)
            identity = D.conj().T @ conjugate_rep_matrix(rep, theta)
            conjugate = max(conjugate, _relative(identity - np.eye(rep.dim), D))
            oracle = max(oracle, _relative(D - rep_matrix_from_sl2c(rep, A), D))
    samples = count * len(REP_LABELS)
    checks.upper("lorentz.conjugate_rep", "representation", conjugate, samples)
    checks.upper("lorentz.symmetric_power_oracle", "representation", oracle, samples)

    subset = thetas[:GROUP_LAW_SAMPLES]
    composed = _rep_homomorphism(subset, rng)
    checks.upper(
        "lorentz.rep_homomorphism", "representation", composed, len(subset) * len(REP_LABELS)
    )

    invariance = 0.0
    a = settings.constants.a
    for theta in subset:
        element = TRANSLATION_SCALE * random_angles(rng)
        translated, jacobian = left_translation_jacobian(element, theta)
        pulled = jacobian.T @ group_metric(translated, a, settings.sign) @ jacobian
        original = group_metric(theta, a, settings.sign)
        invariance = max(invariance, _relative(pulled - original, original))
    checks.upper("lorentz.bi_invariance", "representation", invariance, len(subset))
    return checks.outcome("lorentz")


def _rep_homomorphism(thetas: Sequence[np.ndarray], rng: np.random.Generator) -> float:
    """D(t1) D(t2) = D(compose(t1, t2)), plus the one-parameter subgroups D(s e_k) D(t e_k)."""

    worst = 0.0
    for theta in thetas:
        second = TRANSLATION_SCALE * random_angles(rng)
        combined = compose_angles(theta, second)
        for label in REP_LABELS:
            rep = SpinorRep(*label)
            product = rep_matrix(rep, theta) @ rep_matrix(rep, second)
            expected = rep_matrix(rep, combined)
            worst = max(worst, _relative(product - expected, expected))
            for k in range(6):
                s, t = np.zeros(6), np.zeros(6)
                s[k], t[k] = theta[k], second[k]
                along = rep_matrix(rep, s) @ rep_matrix(rep, t)
                worst = max(worst, _relative(along - rep_matrix(rep, s + t), along))
    return worst


# -- curvature ----------------------------------------------------------------


def _curvature_suite(settings: SuiteSettings) -> SuiteOutcome:
    rng = rng_for(settings.seed, 2)
    count = settings.count("curvature")
    checks = _Checks(settings)

    sphere = sphere_metric(SPHERE_RADIUS)
    expected = 2.0 / SPHERE_RADIUS**2
    sphere_points = [
        np.array([rng.uniform(0.3, 2.8), rng.uniform(-math.pi, math.pi)]) for _ in range(count)
    ]
    sphere_error = max(abs(curvature(sphere, p).scalar - expected) for p in sphere_points)
    checks.upper("curvature.sphere_oracle", "curvature", sphere_error / expected, count)

    unit = sphere_metric(1.0)
    eigen = max(
        abs(complex(laplace_beltrami(unit, sphere_y10, p)) + 2.0 * math.cos(p[0]))
        for p in sphere_points
    )
    checks.upper("curvature.sphere_laplacian", "curvature", eigen, count)

    metric = settings.metric
    reports = [curvature(metric, random_config_point(rng)) for _ in range(count)]
    values = np.array([report.scalar for report in reports])
    closed = scalar_curvature_closed_form(settings.constants, settings.sign)
    spread = float((values.max() - values.min()) / abs(values.mean()))
    checks.upper("curvature.constant", "curvature", spread, count)
    closed_error = float(np.abs(values - closed).max() / abs(closed))
    checks.upper("curvature.closed_form", "curvature", closed_error, count)
    symmetry = max(
        max(
            report.antisymmetry_residual(),
            report.bianchi_residual(),
            report.contraction_residual(),
        )
        for report in reports
    )
    checks.upper("curvature.riemann_symmetries", "curvature", symmetry, count)

    stepped = replace(metric, fd_step=settings.fd_step)
    fd_points = [random_config_point(rng).as_array() for _ in range(min(count, 5))]
    fd_error = max(
        abs(curvature(stepped, p, mode="fd").scalar - curvature(metric, p).scalar) / abs(closed)
        for p in fd_points
    )
    checks.upper("curvature.finite_difference", "finite_difference", fd_error, len(fd_points))

    a2 = settings.constants.a ** 2
    mean = float(values.mean())
    notes = {
        "scalar_curvature": mean,
        "curvature_times_a2": mean * a2,
        "printed_curvature_times_a2": PRINTED_CURVATURE_TIMES_A2,
        "ratio_to_printed": mean * a2 / PRINTED_CURVATURE_TIMES_A2,
    }
    log = logger.warning if abs(notes["ratio_to_printed"] - 1.0) > 1e-6 else logger.info
    log(
        "EVENT=CURVATURE_CALIBRATED VALUE=%.12g PRINTED=%g RATIO=%.6g",
        notes["curvature_times_a2"],
        PRINTED_CURVATURE_TIMES_A2,
        notes["ratio_to_printed"],
    )
    return checks.outcome("curvature", notes)


# -- weyl ---------------------------------------------------------------------


def _weyl_suite(settings: SuiteSettings) -> SuiteOutcome:
    rng = rng_for(settings.seed, 3)
    count = settings.count("weyl")
    metric = settings.metric
    conformal = gauge = forms = compatibility = curl = printed = 0.0
    for _ in range(count):
        q = random_config_point(rng).as_array()
        chi = random_chi(rng)
        rho = random_gauge(rng)
        chi2 = float(chi(q)) ** 2

        result = weyl_curvature_forms(metric, chi, q)
        weighted = chi2 * result.chi_form
        r_bar = curvature(conformal_scale(metric, chi), q).scalar
        conformal = max(conformal, abs(r_bar - weighted) / max(abs(r_bar), 1.0))
        forms = max(forms, result.disagreement)
        printed = max(
            printed,
            abs(result.printed_phi_form - result.chi_form) / max(abs(result.chi_form), 1.0),
        )

        metric_rho, chi_rho = gauge_transform(metric, chi, rho)
        transformed = float(chi_rho(q)) ** 2 * weyl_curvature_forms(metric_rho, chi_rho, q).chi_form
        gauge = max(gauge, abs(transformed - weighted) / max(abs(weighted), 1.0))

        potential = WeylPotential.from_chi(chi)
        derivative = co_covariant_derivative(metric, potential, metric, 1.0, q)
        compatibility = max(compatibility, float(np.abs(derivative).max()))
        curl = max(curl, potential.curl_residual(q))

    checks = _Checks(settings)
    checks.upper("weyl.conformal_curvature", "curvature", conformal, count)
    checks.upper("weyl.gauge_covariance", "curvature", gauge, count)
    checks.upper("weyl.forms_agree", "representation", forms, count)
    checks.upper("weyl.metric_compatibility", "representation", compatibility, count)
    checks.upper("weyl.potential_curl", "algebra", curl, count)
    if printed > 1e-10:
        logger.warning("EVENT=PRINTED_PHI_FORM_MISMATCH MAX_RELATIVE=%.6g", printed)
    return checks.outcome("weyl-gauge", {"printed_phi_form_max_deviation": printed})


# -- madelung -----------------------------------------------------------------


def _madelung_suite(settings: SuiteSettings) -> SuiteOutcome:
    rng = rng_for(settings.seed, 4)
    count = settings.count("madelung")
    metric = settings.metric
    constants = settings.constants
    fields = settings.fields
    checks = _Checks(settings)

    identity = 0.0
    drawn = []
    for _ in range(count):
        pair = random_pair(rng)
        q = random_config_point(rng).as_array()
        drawn.append((pair, q))
        sample = madelung_decomposition(pair, q, fields, constants, metric)
        identity = max(identity, sample.residual)
    checks.upper("madelung.identity", "curvature", identity, count)

    notes: dict[str, Any] = {}
    if settings.negative_enabled:
        checks.restart()
        perturbed = constants.with_gamma2(settings.negative_gamma2)
        # the same pairs, continued from the same stream up to a minimum sample size
        while len(drawn) < NEGATIVE_MIN_SAMPLES:
            drawn.append((random_pair(rng), random_config_point(rng).as_array()))
        worst = 0.0
        for pair, q in drawn:
            sample = madelung_decomposition(pair, q, fields, perturbed, metric)
            worst = max(worst, sample.residual)
        notes["negative_gamma2"] = settings.negative_gamma2
        notes["negative_max_residual"] = worst
        checks.lower("madelung.negative_gamma2", worst, NEGATIVE_BOUND, len(drawn))
    return checks.outcome("madelung", notes)


# -- reduction ----------------------------------------------------------------


def _reduction_suite(settings: SuiteSettings) -> SuiteOutcome:
    rng = rng_for(settings.seed, 5)
    count = settings.count("reduction")
    constants = settings.constants
    metric = settings.metric
    configurations = (FieldConfig.none(), FieldConfig.uniform(UNIFORM_E, UNIFORM_H))
    checks = _Checks(settings)

    worst = 0.0
    evaluated = 0
    for label in REDUCTION_LABELS:
        rep = SpinorRep(*label)
        kinds = ("undotted",) if rep.dim == 1 else ("undotted", "dotted")
        for kind in kinds:
            for fields in configurations:
                for _ in range(count):
                    amplitude = _random_spinor(rng, rep.dim)
                    spinor = plane_wave_spinor_field(
                        rep, kind, _random_momentum(rng), amplitude, constants
                    )
                    q = random_config_point(rng).as_array()
                    sample = reduction_check(
                        spinor, q, fields, constants, metric, sign=settings.sign
                    )
                    worst = max(worst, sample.residual)
                    evaluated += 1
    checks.upper("reduction.theorem", "reduction", worst, evaluated)

    casimir_error = float(np.abs(casimir(DIRAC_BLOCK) - 1.5 * np.eye(2)).max())
    checks.upper("reduction.casimir_half", "algebra", casimir_error, 1)

    points = [random_config_point(rng).as_array() for _ in range(count)]
    calibration = reduction_calibration(constants, metric, points, sign=settings.sign)
    checks.upper(
        "reduction.casimir_eigenrelation",
        "curvature",
        max(calibration.casimir_spread, calibration.eigen_residual),
        count,
    )
    checks.upper("reduction.calibration_closure", "curvature", calibration.closure, count)
    return checks.outcome("reduction", {"calibration": calibration.as_dict()})


# -- dirac --------------------------------------------------------------------


def _dirac_suite(settings: SuiteSettings) -> SuiteOutcome:
    rng = rng_for(settings.seed, 6)
    constants = settings.constants
    count = settings.count("reduction")
    m, c, hbar = constants.m, constants.c, constants.hbar
    mass_scale = (m * c) ** 2
    free = FieldConfig.none()
    checks = _Checks(settings)

    factor = constants.a * m * c / hbar
    expected = math.sqrt(1.5 * (1.0 + 4.0 * constants.gamma2))
    checks.upper("dirac.length_scale", "algebra", abs(factor - expected), 1)

    def shell_residual(wave: DiracPlaneWave, x: np.ndarray) -> float:
        residual = squared_dirac_residual(wave.field, x, free, constants)
        return float(np.linalg.norm(residual)) / (mass_scale * float(np.linalg.norm(wave.field(x))))

    first = squared = 0.0
    waves = []
    for _ in range(count):
        p = on_shell_momentum(rng.uniform(-0.8, 0.8, size=3), m, c)
        wave = dirac_plane_wave(p, _random_spinor(rng, 2), m, constants)
        waves.append(wave)
        first = max(first, wave.first_order_residual())
        squared = max(squared, shell_residual(wave, rng.uniform(-1.0, 1.0, size=4)))
    checks.upper("dirac.first_order", "algebra", first, count)
    checks.upper("dirac.on_shell", "representation", squared, count)

    smallest = math.inf
    for wave in waves:
        p = wave.momentum.copy()
        p[0] *= 1.05
        off = dirac_plane_wave(p, (1.0, 0.0), m, constants, require_on_shell=False)
        smallest = min(smallest, shell_residual(off, rng.uniform(-1.0, 1.0, size=4)))
    checks.lower("dirac.off_shell", smallest, OFF_SHELL_BOUND, count)

    uniform = FieldConfig.uniform(UNIFORM_E, UNIFORM_H)
    printed_curvature = PRINTED_CURVATURE_TIMES_A2 / constants.a**2
    E = np.asarray(UNIFORM_E)
    H = np.asarray(UNIFORM_H)
    f2_coefficient = (constants.e * constants.a / c) ** 2 * float(H @ H - E @ E)
    block = toggle = 0.0
    for _ in range(count):
        u = _random_spinor(rng, 4)
        dirac = DiracPlaneWave(momentum=_random_momentum(rng), spinor=u, mass=m, hbar=hbar, c=c)
        field_d = dirac.field
        x = rng.uniform(-1.0, 1.0, size=4)
        with_f2 = squared_dirac_residual(field_d, x, uniform, constants)
        assembled = np.concatenate(
            [
                coefficient_residual(
                    half, x, uniform, constants, curvature=printed_curvature, c_casimir=1.0
                )
                for half in (field_d.upper(), field_d.lower())
            ]
        )
        block = max(block, _relative(with_f2 - assembled, with_f2))
        without = squared_dirac_residual(field_d, x, uniform, constants, include_f2_term=False)
        expected_term = f2_coefficient * np.asarray(field_d(x))
        toggle = max(toggle, _relative(with_f2 - without - expected_term, expected_term))
    checks.upper("dirac.block_assembly", "curvature", block, count)
    checks.upper("dirac.f2_toggle", "algebra", toggle, count)

    f2 = invariant_f2(field_strength(uniform, np.zeros(4)))
    shifted = hbar**2 * constants.gamma2 * kaluza_klein_shift(constants, f2)
    shift = abs(shifted + f2_coefficient) / max(abs(f2_coefficient), 1.0)
    checks.upper("dirac.curvature_shift", "algebra", shift, 1)
    return checks.outcome("dirac", {"a_times_mc_over_hbar": factor, "gamma2": constants.gamma2})


# -- current ------------------------------------------------------------------


def _current_suite(settings: SuiteSettings) -> SuiteOutcome:
    rng = rng_for(settings.seed, 7)
    count = settings.count("reduction")
    constants = settings.constants
    metric = settings.metric
    free = FieldConfig.none()
    hbar, a = constants.hbar, constants.a
    r = scalar_curvature_closed_form(constants, settings.sign)
    spin_mass = (hbar / a) ** 2 * DIRAC_BLOCK.casimir_value / (2.0 * settings.sign)
    effective_mass2 = hbar**2 * constants.gamma2 * r + spin_mass
    checks = _Checks(settings)

    divergence = imaginary = 0.0
    for _ in range(count):
        p3 = rng.uniform(-0.5, 0.5, size=3)
        p = np.concatenate(([math.sqrt(effective_mass2 + float(p3 @ p3))], p3))
        amplitude = _random_spinor(rng, 2)
        psi = mode_field(plane_wave_spinor_field(DIRAC_BLOCK, "undotted", p, amplitude, constants))
        q = random_config_point(rng).as_array()
        sample = current(psi, q, free, constants, metric)
        div = current_divergence(psi, q, free, constants, metric)
        divergence = max(divergence, abs(div) / max(float(np.abs(sample.j).max()), 1.0))
        imaginary = max(imaginary, sample.imaginary)
    checks.upper("current.divergence_free", "reduction", divergence, count)
    checks.upper("current.real", "algebra", imaginary, count)

    link = wave_link = 0.0
    fields = settings.fields
    for _ in range(count):
        pair = random_pair(rng)
        q = random_config_point(rng).as_array()
        psi = psi_from_potentials(pair, constants)
        div = current_divergence(psi, q, fields, constants, metric)
        weight = float(pair.chi(q)) ** (-constants.n)
        predicted = weight * continuity_residual(pair, q, fields, constants, metric)
        link = max(link, abs(div - predicted) / max(abs(predicted), 1.0))
        w = wave_residual(psi, q, fields, constants, metric)
        source = float(np.imag(np.conj(complex(psi(q))) * w)) / hbar
        wave_link = max(wave_link, abs(div + source) / max(abs(div), 1.0))
    checks.upper("current.continuity_link", "curvature", link, count)
    checks.upper("current.wave_link", "curvature", wave_link, count)
    return checks.outcome("current")


# -- trajectories -------------------------------------------------------------


def _trajectory_suite(settings: SuiteSettings) -> SuiteOutcome:
    constants = settings.constants
    metric = settings.metric
    sign = settings.sign
    m, c = constants.m, constants.c
    origin = ConfigPoint(x=(0.0, 0.0, 0.0, 0.0), theta=(0.0,) * 6)
    checks = _Checks(settings)

    p = on_shell_momentum((0.3, -0.2, 0.1), m, c)
    single = plane_wave_psi([p], [1.0], constants)
    line = integrate_trajectory(origin, single, 2.0, 200, None, constants, metric, sign=sign)
    expected = np.outer(line.sigmas, p)
    slope = float(np.abs(line.positions - expected).max()) / max(float(np.abs(expected).max()), 1.0)
    slope = max(slope, float(np.abs(line.angles).max()))
    checks.upper("trajectory.plane_wave_slope", "curvature", slope, len(line))

    p1 = np.array([m * c, 0.0, 0.0, 0.0])
    p2 = on_shell_momentum((0.5, 0.0, 0.0), m, c)
    pair_wave = plane_wave_psi([p1, p2], [1.0, 0.5], constants)
    study = convergence_order(origin, pair_wave, 20.0, 80, None, constants, metric, sign=sign)
    checks.lower("trajectory.convergence_order", study.order, CONVERGENCE_BOUND, 3)

    rotating = FieldConfig.uniform((0.1, 0.0, 0.0), (0.0, 0.0, 0.5))
    spun = integrate_trajectory(
        origin,
        pair_wave,
        2.0,
        settings.count("trajectory_steps"),
        rotating,
        constants,
        metric,
        sign=sign,
    )
    checks.upper("trajectory.fourleg_drift", "representation", fourleg_drift(spun), len(spun))

    rest = plane_wave_psi([p1], [1.0], constants)
    quiet = zitterbewegung_report(
        integrate_trajectory(origin, rest, 80.0, 800, None, constants, metric, sign=sign),
        constants,
    )
    beating = zitterbewegung_report(
        integrate_trajectory(origin, pair_wave, 80.0, 800, None, constants, metric, sign=sign),
        constants,
        source=pair_wave,
        metric=metric,
        diagnostic_points=VOLUME_POINTS,
    )
    floor = max(quiet.amplitude, NOISE_FLOOR)
    checks.lower(
        "trajectory.zitterbewegung_amplitude", beating.amplitude, ZITTERBEWEGUNG_FACTOR * floor, 2
    )
    notes = {
        "convergence_errors": list(study.errors),
        "convergence_order": study.order,
        "zitterbewegung": beating.as_dict(),
        "noise_floor": floor,
    }
    return checks.outcome("trajectory-convergence", notes)


SUITES: dict[str, Callable[[SuiteSettings], SuiteOutcome]] = {
    "lorentz": _lorentz_suite,
    "curvature": _curvature_suite,
    "weyl-gauge": _weyl_suite,
    "madelung": _madelung_suite,
    "reduction": _reduction_suite,
    "dirac": _dirac_suite,
    "current": _current_suite,
    "trajectory-convergence": _trajectory_suite,
}


def _unknown_suite(name: str) -> ValueError:
    return ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")


def run_suite(name: str, settings: SuiteSettings) -> SuiteOutcome:
    try:
        runner = SUITES[name]
    except KeyError:
        raise _unknown_suite(name) from None
    logger.info("EVENT=SUITE_START NAME=%s SEED=%d", name, settings.seed)
    outcome = runner(settings)
    logger.info(
        "EVENT=SUITE_DONE NAME=%s STATUS=%s", name, "pass" if outcome.passed else "fail"
    )
    return outcome


def run_suites(settings: SuiteSettings, names: Sequence[str] | None = None) -> SuiteRun:
    """Run *names* (default: all) and return outcomes in the requested order."""

    selected = list(names) if names else list(SUITE_NAMES)
    for name in selected:
        if name not in SUITES:
            raise _unknown_suite(name)
    if settings.workers > 1 and len(selected) > 1:
        with ThreadPoolExecutor(max_workers=settings.workers) as pool:
            outcomes = list(pool.map(lambda name: run_suite(name, settings), selected))
    else:
        outcomes = [run_suite(name, settings) for name in selected]
    return SuiteRun(outcomes=tuple(outcomes))
