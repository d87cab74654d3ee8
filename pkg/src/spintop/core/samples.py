"""Seeded random points and fields plus oracle metrics for the verification suites."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from . import jets
from .constants import PhysicalConstants
from .geometry import MINKOWSKI, ConfigPoint, MetricField
from .wave import PotentialPair, WaveField

__all__ = [
    "ROTATION_RANGE",
    "BOOST_RANGE",
    "PolynomialField",
    "rng_for",
    "random_angles",
    "random_config_point",
    "random_polynomial",
    "random_pair",
    "random_chi",
    "random_gauge",
    "sphere_metric",
    "sphere_y10",
    "flat_metric",
    "plane_wave_psi",
]

ROTATION_RANGE = 1.0
BOOST_RANGE = 0.6


def rng_for(seed: int, *labels: int) -> np.random.Generator:
    """Independent generator per (seed, labels) so checks do not share streams."""

    return np.random.default_rng([int(seed), *[int(label) for label in labels]])


def random_angles(rng: np.random.Generator) -> np.ndarray:
    rotations = rng.uniform(-ROTATION_RANGE, ROTATION_RANGE, size=3)
    boosts = rng.uniform(-BOOST_RANGE, BOOST_RANGE, size=3)
    return np.concatenate((rotations, boosts))


def random_config_point(rng: np.random.Generator) -> ConfigPoint:
    x = rng.uniform(-1.0, 1.0, size=4)
    return ConfigPoint(x=tuple(x), theta=tuple(random_angles(rng)))


@dataclass(frozen=True)
class PolynomialField:
    """offset + b.q + q.C.q + amplitude sin(k.q); jet-compatible."""

    offset: float
    linear: np.ndarray
    quadratic: np.ndarray
    wave_vector: np.ndarray
    sine_amplitude: float = 0.0

    def __call__(self, q: Any) -> Any:
        result = self.linear @ q + (q @ self.quadratic) @ q + self.offset
        if self.sine_amplitude:
            result = result + jets.sin(self.wave_vector @ q) * self.sine_amplitude
        return result


def random_polynomial(
    rng: np.random.Generator,
    dim: int = 10,
    *,
    offset: float = 0.0,
    linear_scale: float = 1.0,
    quadratic_scale: float = 0.5,
    sine_amplitude: float = 0.0,
) -> PolynomialField:
    quadratic = rng.normal(scale=quadratic_scale, size=(dim, dim))
    return PolynomialField(
        offset=float(offset),
        linear=rng.normal(scale=linear_scale, size=dim),
        quadratic=0.5 * (quadratic + quadratic.T),
        wave_vector=rng.normal(size=dim),
        sine_amplitude=float(sine_amplitude),
    )


def random_chi(rng: np.random.Generator, dim: int = 10) -> PolynomialField:
    """Positive Weyl factor 1.5 + small polynomial on the sampling box."""

    return random_polynomial(rng, dim, offset=1.5, linear_scale=0.05, quadratic_scale=0.01)


def random_pair(rng: np.random.Generator, dim: int = 10) -> PotentialPair:
    S = random_polynomial(rng, dim, linear_scale=1.0, quadratic_scale=0.5, sine_amplitude=0.3)
    return PotentialPair.of(S, random_chi(rng, dim))


def random_gauge(rng: np.random.Generator, dim: int = 10) -> PolynomialField:
    """Positive gauge factor rho = 1.2 + small polynomial."""

    return random_polynomial(rng, dim, offset=1.2, linear_scale=0.05, quadratic_scale=0.01)


def sphere_metric(radius: float = 1.0) -> MetricField:
    """Round 2-sphere in (polar, azimuth) coordinates; scalar curvature 2 / r^2."""

    r2 = float(radius) ** 2

    def evaluate(q: Any) -> Any:
        s = jets.sin(q[0])
        return jets.stack([jets.stack([r2 + 0.0 * s, 0.0 * s]), jets.stack([0.0 * s, s * s * r2])])

    return MetricField(evaluator=evaluate, dim=2, name=f"sphere(r={radius:g})")


def sphere_y10(q: Any) -> Any:
    """cos(polar): an eigenfunction of the unit-sphere Laplacian with eigenvalue -2."""

    return jets.cos(q[0])


def flat_metric(dim: int = 4, signature: Sequence[float] | None = None) -> MetricField:
    diagonal = np.asarray(signature if signature is not None else np.diag(MINKOWSKI), dtype=float)
    if diagonal.shape != (dim,):
        raise ValueError("signature length must match dim")
    g = np.diag(diagonal)
    return MetricField(evaluator=lambda q: g, dim=dim, name=f"flat({dim})", constant_curvature=0.0)


def plane_wave_psi(
    momenta: Sequence[Sequence[float]],
    weights: Sequence[float],
    constants: PhysicalConstants,
) -> WaveField:
    """sum_k w_k exp(i p_k,mu x^mu / hbar) for contravariant momenta; theta-independent."""

    covariant = [MINKOWSKI @ np.asarray(p, dtype=float) for p in momenta]
    weights = [float(w) for w in weights]
    hbar = constants.hbar

    def psi(q: Any) -> Any:
        x = q[:4]
        total: Any = 0.0
        for p_cov, w in zip(covariant, weights):
            total = jets.exp((p_cov @ x) * (1j / hbar)) * w + total
        return total

    return WaveField(psi=psi, name=f"plane waves x{len(weights)}")
