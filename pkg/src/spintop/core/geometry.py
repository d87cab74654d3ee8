"""Tensor calculus on the configuration space M4 x SO(3,1).

Metrics are plain callables of the coordinates.  Derivatives come from
second-order jets pushed through those callables; a central-difference mode is
kept for cross-checking.  Index conventions: ``dg[i, j, k] = d_k g_ij``,
``christoffel[i, j, k] = Gamma^i_{jk}`` and ``riemann[i, j, k, l] = R^i_{jkl}``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Any, Callable, Sequence

import numpy as np

from . import jets
from .constants import PRINTED_CURVATURE_TIMES_A2, PhysicalConstants
from .errors import DomainError, NonpositiveWeylFactor, SingularMetric
from .lorentz import algebra_metric, group_metric, killing_form

logger = logging.getLogger(__name__)

__all__ = [
    "MINKOWSKI",
    "ConfigPoint",
    "ScalarField",
    "MetricField",
    "MetricSample",
    "CurvatureReport",
    "coords",
    "as_scalar_field",
    "field_derivatives",
    "config_metric",
    "christoffel",
    "connection_curvature",
    "curvature",
    "scalar_curvature",
    "scalar_curvature_closed_form",
    "laplace_beltrami",
    "divergence",
    "conformal_scale",
    "curvature_spread",
]

MINKOWSKI = np.diag([-1.0, 1.0, 1.0, 1.0])
SINGULAR_CONDITION = 1e12
DEFAULT_FD_STEP = 1e-4

ScalarField = Callable[[Any], Any]


@dataclass(frozen=True, slots=True)
class ConfigPoint:
    """A point q = (x^mu, theta^alpha) of the ten-dimensional configuration space."""

    x: tuple[float, float, float, float]
    theta: tuple[float, float, float, float, float, float]

    def __post_init__(self) -> None:
        x = tuple(float(v) for v in self.x)
        theta = tuple(float(v) for v in self.theta)
        if len(x) != 4 or len(theta) != 6:
            raise DomainError("a configuration point has 4 space-time and 6 angle coordinates")
        if not all(math.isfinite(v) for v in x + theta):
            raise DomainError("configuration point coordinates must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_array(cls, values: Sequence[float]) -> "ConfigPoint":
        values = [float(v) for v in values]
        if len(values) != 10:
            raise DomainError(f"expected 10 coordinates, got {len(values)}")
        return cls(x=tuple(values[:4]), theta=tuple(values[4:]))

    def as_array(self) -> np.ndarray:
        return np.array(self.x + self.theta)


def coords(q: Any) -> Any:
    """Return *q* as a float coordinate array; jets pass through unchanged."""

    if isinstance(q, jets.Jet):
        return q
    if isinstance(q, ConfigPoint):
        return q.as_array()
    arr = np.asarray(q, dtype=float)
    if arr.ndim != 1:
        raise DomainError(f"coordinates must be one-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("coordinates must be finite")
    return arr


def as_scalar_field(f: Any) -> ScalarField:
    """Wrap a number as a constant field; callables are returned unchanged."""

    if callable(f):
        return f
    constant_value = float(f)
    return lambda q: constant_value


def field_derivatives(f: ScalarField, q: Any, *, order: int = 2) -> tuple[np.ndarray, ...]:
    """Return (value, gradient, hessian) of *f* at *q*; the Hessian is omitted for order 1."""

    point = coords(q)
    n = point.shape[0]
    result = f(jets.seed(point, order=order))
    if isinstance(result, jets.Jet):
        val, grad, hess = result.val, result.grad, result.hess
    else:
        val = np.asarray(result)
        grad = np.zeros(val.shape + (n,), dtype=val.dtype)
        hess = np.zeros(val.shape + (n, n), dtype=val.dtype)
    if order < 2:
        return val, grad
    return val, grad, hess


class MetricSample:
    """Metric, its first and (optionally) second derivatives at one point."""

    def __init__(self, g: np.ndarray, dg: np.ndarray, d2g: np.ndarray | None = None) -> None:
        self.g = np.asarray(g, dtype=float)
        self.dg = np.asarray(dg, dtype=float)
        self.d2g = None if d2g is None else np.asarray(d2g, dtype=float)

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @cached_property
    def inverse(self) -> np.ndarray:
        if not np.all(np.isfinite(self.g)) or np.linalg.cond(self.g) > SINGULAR_CONDITION:
            raise SingularMetric()
        try:
            return np.linalg.inv(self.g)
        except np.linalg.LinAlgError as exc:
            raise SingularMetric() from exc

    @cached_property
    def inverse_derivative(self) -> np.ndarray:
        """d_k g^{ij} = -g^{ia} d_k g_ab g^{bj}."""

        ginv = self.inverse
        return -np.einsum("ia,abk,bj->ijk", ginv, self.dg, ginv)

    @cached_property
    def _lowered_terms(self) -> np.ndarray:
        dg = self.dg
        return np.einsum("lkj->ljk", dg) + dg - np.einsum("jkl->ljk", dg)

    @cached_property
    def christoffel(self) -> np.ndarray:
        return 0.5 * np.einsum("il,ljk->ijk", self.inverse, self._lowered_terms)

    @cached_property
    def christoffel_derivative(self) -> np.ndarray:
        """d_m Gamma^i_{jk}, stored as [i, j, k, m]."""

        if self.d2g is None:
            raise ValueError("second metric derivatives were not sampled")
        d2g = self.d2g
        dterms = np.einsum("lkjm->ljkm", d2g) + d2g - np.einsum("jklm->ljkm", d2g)
        return 0.5 * (
            np.einsum("ilm,ljk->ijkm", self.inverse_derivative, self._lowered_terms)
            + np.einsum("il,ljkm->ijkm", self.inverse, dterms)
        )

    @cached_property
    def log_volume_gradient(self) -> np.ndarray:
        """d_k ln sqrt|g| = Gamma^i_{ik}."""

        return 0.5 * np.einsum("ij,jik->k", self.inverse, self.dg)


@dataclass(frozen=True)
class MetricField:
    """Callable metric g_ij(q) on a coordinate patch.

    ``constant_curvature`` is filled for metrics whose scalar curvature is known
    algebraically, letting the wave operators skip the coordinate curvature.
    """

    evaluator: Callable[[Any], Any]
    dim: int
    name: str = "metric"
    constant_curvature: float | None = None
    fd_step: float = DEFAULT_FD_STEP
    metadata: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __call__(self, q: Any) -> Any:
        point = coords(q)
        if point.shape != (self.dim,):
            raise DomainError(f"{self.name} expects {self.dim} coordinates, got {point.shape}")
        return self.evaluator(point)

    def sample(self, q: Any, *, order: int = 2, mode: str = "jet") -> MetricSample:
        """Return g with its derivatives at *q* by jets (``mode="jet"``) or central differences."""

        point = jets.value(coords(q)).astype(float)
        if mode == "fd":
            return self._sample_fd(point, order)
        if mode != "jet":
            raise ValueError(f"unknown differentiation mode {mode!r}")
        result = self(jets.seed(point, order=order))
        if not isinstance(result, jets.Jet):
            g = np.asarray(result, dtype=float)
            zeros = np.zeros(g.shape + (self.dim,))
            hess = np.zeros(g.shape + (self.dim, self.dim)) if order >= 2 else None
            return MetricSample(g, zeros, hess)
        return MetricSample(result.val, result.grad, result.hess if order >= 2 else None)

    def _sample_fd(self, point: np.ndarray, order: int) -> MetricSample:
        h = self.fd_step
        n = self.dim
        eye = np.eye(n) * h

        def at(offset: np.ndarray) -> np.ndarray:
            return np.asarray(self(point + offset), dtype=float)

        g = at(np.zeros(n))
        dg = np.stack([(at(eye[k]) - at(-eye[k])) / (2.0 * h) for k in range(n)], axis=-1)
        d2g = None
        if order >= 2:
            d2g = np.empty((n, n, n, n))
            for k in range(n):
                for m in range(k, n):
                    value = (
                        at(eye[k] + eye[m])
                        - at(eye[k] - eye[m])
                        - at(-eye[k] + eye[m])
                        + at(-eye[k] - eye[m])
                    ) / (4.0 * h * h)
                    d2g[:, :, k, m] = value
                    d2g[:, :, m, k] = value
        return MetricSample(g, dg, d2g)


@dataclass(frozen=True)
class CurvatureReport:
    """Riemann, Ricci and scalar curvature at one point."""

    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    point: Any
    metric: np.ndarray
    inverse: np.ndarray

    def lowered(self) -> np.ndarray:
        """R_{ijkl} = g_im R^m_{jkl}."""

        return np.einsum("im,mjkl->ijkl", self.metric, self.riemann)

    def antisymmetry_residual(self) -> float:
        low = self.lowered()
        first = np.abs(low + np.swapaxes(low, 0, 1)).max()
        second = np.abs(low + np.swapaxes(low, 2, 3)).max()
        return float(max(first, second))

    def bianchi_residual(self) -> float:
        r = self.riemann
        cyclic = r + np.einsum("iklj->ijkl", r) + np.einsum("iljk->ijkl", r)
        return float(np.abs(cyclic).max())

    def contraction_residual(self) -> float:
        ricci = np.einsum("ijil->jl", self.riemann)
        return float(abs(np.einsum("jl,jl->", self.inverse, ricci) - self.scalar))


def config_metric(constants: PhysicalConstants, sign: int = 1) -> MetricField:
    """Return the block metric Minkowski (+) group metric of the top."""

    return _config_metric(float(constants.a), int(sign))


@lru_cache(maxsize=32)
def _config_metric(a: float, sign: int) -> MetricField:
    if not a > 0.0:
        raise DomainError(f"length scale a must be positive, got {a!r}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")

    def evaluate(q: Any) -> Any:
        return jets.block_diag(MINKOWSKI, group_metric(q[4:], a, sign))

    return MetricField(
        evaluator=evaluate,
        dim=10,
        name=f"config(a={a:g},sign={sign:+d})",
        constant_curvature=_closed_form_curvature(a, sign),
    )


def christoffel(metric: MetricField, q: Any, *, mode: str = "jet") -> np.ndarray:
    """Levi-Civita symbols Gamma^i_{jk} = 1/2 g^{il}(d_j g_lk + d_k g_lj - d_l g_jk)."""

    return metric.sample(q, order=1, mode=mode).christoffel


def connection_curvature(
    gamma: np.ndarray, dgamma: np.ndarray, inverse: np.ndarray
) -> tuple[np.ndarray, np.ndarray, float]:
    """Riemann, Ricci and g-contracted scalar of an arbitrary torsion-free connection."""

    riemann = (
        np.einsum("iljk->ijkl", dgamma)
        - np.einsum("ikjl->ijkl", dgamma)
        + np.einsum("ikm,mlj->ijkl", gamma, gamma)
        - np.einsum("ilm,mkj->ijkl", gamma, gamma)
    )
    ricci = np.einsum("ijil->jl", riemann)
    scalar = float(np.einsum("jl,jl->", inverse, ricci).real)
    return riemann, ricci, scalar


def curvature(metric: MetricField, q: Any, *, mode: str = "jet") -> CurvatureReport:
    sample = metric.sample(q, order=2, mode=mode)
    riemann, ricci, scalar = connection_curvature(
        sample.christoffel, sample.christoffel_derivative, sample.inverse
    )
    return CurvatureReport(
        riemann=riemann,
        ricci=ricci,
        scalar=scalar,
        point=q,
        metric=sample.g,
        inverse=sample.inverse,
    )


def scalar_curvature(metric: MetricField, q: Any) -> float:
    """Scalar curvature at *q*, from the closed form when the metric carries one."""

    if metric.constant_curvature is not None:
        return metric.constant_curvature
    return curvature(metric, q).scalar


@lru_cache(maxsize=32)
def _closed_form_curvature(a: float, sign: int) -> float:
    eta = algebra_metric(a, sign)
    ricci = -0.25 * killing_form()
    value = float(np.einsum("ab,ab->", np.linalg.inv(eta), ricci))
    ratio = value * a * a / PRINTED_CURVATURE_TIMES_A2
    if not math.isclose(ratio, 1.0, rel_tol=1e-9):
        # once per (a, sign)
        logger.warning(
            "EVENT=PRINTED_CURVATURE_MISMATCH R_A2=%.12g PRINTED=%g RATIO=%.6g SIGN=%d",
            value * a * a,
            PRINTED_CURVATURE_TIMES_A2,
            ratio,
            sign,
        )
    return value


def scalar_curvature_closed_form(constants: PhysicalConstants | float, sign: int = 1) -> float:
    """Scalar curvature of the bi-invariant group metric from Ric = -B/4.

    Needs no coordinates: only the structure constants and the trace form.
    The Minkowski block is flat and contributes nothing.
    """

    a = constants.a if isinstance(constants, PhysicalConstants) else float(constants)
    value = _closed_form_curvature(float(a), int(sign))
    ratio = value * a * a / PRINTED_CURVATURE_TIMES_A2
    logger.debug(
        "EVENT=CURVATURE_CLOSED_FORM VALUE=%.12g R_A2=%.12g PRINTED=%g RATIO=%.6g",
        value,
        value * a * a,
        PRINTED_CURVATURE_TIMES_A2,
        ratio,
    )
    return value


def laplace_beltrami(
    metric: MetricField,
    f: ScalarField,
    q: Any,
    *,
    sample: MetricSample | None = None,
) -> Any:
    """Delta f = g^{ij}(d_i d_j f - Gamma^k_{ij} d_k f), entrywise for array-valued *f*."""

    sample = sample or metric.sample(q, order=1)
    _, grad, hess = field_derivatives(f, q, order=2)
    contracted = np.einsum("ij,kij->k", sample.inverse, sample.christoffel)
    second = np.einsum("ij,...ij->...", sample.inverse, hess)
    first = np.einsum("k,...k->...", contracted, grad)
    return second - first


def divergence(
    metric: MetricField,
    vector_field: Callable[[Any], Any],
    q: Any,
    *,
    sample: MetricSample | None = None,
) -> Any:
    """(1/sqrt|g|) d_i(sqrt|g| V^i) for a contravariant vector field."""

    sample = sample or metric.sample(q, order=1)
    val, grad = field_derivatives(vector_field, q, order=1)
    return np.trace(grad) + sample.log_volume_gradient @ val


def _positive_chi(chi_value: Any) -> Any:
    raw = jets.value(chi_value)
    if not np.all(np.real(raw) > 0.0):
        raise NonpositiveWeylFactor(float(np.min(np.real(raw))))
    return chi_value


def conformal_scale(metric: MetricField, chi: Any) -> MetricField:
    """Return the conformally scaled metric chi^-2 g."""

    chi_field = as_scalar_field(chi)
    base = metric

    def evaluate(q: Any) -> Any:
        factor = _positive_chi(chi_field(q))
        return base.evaluator(q) * factor**-2.0

    constant = None
    if not callable(chi) and base.constant_curvature is not None:
        if float(chi) <= 0.0:
            raise NonpositiveWeylFactor(float(chi))
        constant = base.constant_curvature * float(chi) ** 2
    return MetricField(
        evaluator=evaluate,
        dim=base.dim,
        name=f"{base.name}/chi^2",
        constant_curvature=constant,
        fd_step=base.fd_step,
    )


def curvature_spread(values: Sequence[float]) -> float:
    """Relative spread (max - min) / max(|mean|, tiny) of a set of curvature values."""

    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return 0.0
    scale = max(abs(float(arr.mean())), np.finfo(float).tiny)
    return float((arr.max() - arr.min()) / scale)
