"""Electromagnetic data on space-time and its lift to the configuration space.

Sign table (x^0 = ct, metric diag(-1, 1, 1, 1)):

* A_mu = (-phi, A_x, A_y, A_z)
* F_{mu nu} = d_mu A_nu - d_nu A_mu
* E_k = F_{k0},  H_k = 1/2 eps_{kij} F_{ij}
* 1/2 F_{mu nu} F^{mu nu} = H^2 - E^2
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any, Callable, Sequence

import numpy as np

from . import jets
from .constants import PhysicalConstants
from .errors import ConfigError, DomainError
from .geometry import coords
from .lorentz import EPSILON, G, killing_vectors

logger = logging.getLogger(__name__)

__all__ = [
    "FIELD_KINDS",
    "FieldConfig",
    "field_strength",
    "electric_from_strength",
    "magnetic_from_strength",
    "invariant_f2",
    "em_lift",
    "fields_from_config",
]

FIELD_KINDS: tuple[str, ...] = ("none", "uniform", "plane-wave")


def _vector3(values: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be three finite numbers")
    return arr


@dataclass(frozen=True)
class FieldConfig:
    """Four-potential A_mu(x) with the matching E(x) and H(x)."""

    kind: str
    potential: Callable[[Any], Any]
    electric: Callable[[Any], Any]
    magnetic: Callable[[Any], Any]
    is_uniform: bool = False

    @classmethod
    def none(cls) -> "FieldConfig":
        zero3 = np.zeros(3)
        return cls(
            kind="none",
            potential=lambda x: np.zeros(4),
            electric=lambda x: zero3,
            magnetic=lambda x: zero3,
            is_uniform=True,
        )

    @classmethod
    def uniform(
        cls,
        E: Sequence[float] = (0.0, 0.0, 0.0),
        H: Sequence[float] = (0.0, 0.0, 0.0),
    ) -> "FieldConfig":
        """Constant fields in the gauge A_0 = E.r, A = H x r / 2."""

        E = _vector3(E, "E")
        H = _vector3(H, "H")
        cross_h = np.einsum("ijk,j->ik", EPSILON, H)

        def potential(x: Any) -> Any:
            r = x[1:]
            a0 = E @ r
            spatial = 0.5 * (cross_h @ r)
            return jets.stack([a0, spatial[0], spatial[1], spatial[2]])

        return cls(
            kind="uniform",
            potential=potential,
            electric=lambda x: E,
            magnetic=lambda x: H,
            is_uniform=True,
        )

    @classmethod
    def plane_wave(
        cls,
        amplitude: float,
        wave_vector: Sequence[float],
        polarization: Sequence[float],
    ) -> "FieldConfig":
        """Linearly polarized vacuum wave A = amplitude * eps * cos(k_mu x^mu)."""

        k = _vector3(wave_vector, "wave_vector")
        eps = _vector3(polarization, "polarization")
        norm_k = float(np.linalg.norm(k))
        if norm_k == 0.0:
            raise DomainError("wave_vector must be nonzero")
        if abs(eps @ k) > 1e-12 * norm_k * max(float(np.linalg.norm(eps)), 1.0):
            raise DomainError("polarization must be transverse to wave_vector")
        k_cov = np.concatenate(([-norm_k], k))
        k_cross_eps = np.cross(k, eps)
        amp = float(amplitude)

        def phase(x: Any) -> Any:
            return k_cov @ x

        def potential(x: Any) -> Any:
            c = jets.cos(phase(x)) * amp
            return jets.stack([0.0 * c, eps[0] * c, eps[1] * c, eps[2] * c])

        def electric(x: Any) -> Any:
            s = jets.sin(phase(x)) * (-amp * norm_k)
            return jets.stack([eps[0] * s, eps[1] * s, eps[2] * s])

        def magnetic(x: Any) -> Any:
            s = jets.sin(phase(x)) * (-amp)
            return jets.stack([k_cross_eps[0] * s, k_cross_eps[1] * s, k_cross_eps[2] * s])

        return cls(kind="plane-wave", potential=potential, electric=electric, magnetic=magnetic)

    def fields_at(self, x: Any) -> tuple[np.ndarray, np.ndarray]:
        """Plain (E, H) values at *x*."""

        point = jets.value(coords(x))
        return (
            np.asarray(jets.value(self.electric(point)), dtype=float),
            np.asarray(jets.value(self.magnetic(point)), dtype=float),
        )


def field_strength(fields: FieldConfig, x: Any) -> np.ndarray:
    """F_{mu nu} = d_mu A_nu - d_nu A_mu by exact differentiation of the potential."""

    point = jets.value(coords(x)).astype(float)
    result = fields.potential(jets.seed(point, order=1))
    if not isinstance(result, jets.Jet):
        return np.zeros((4, 4))
    grad = result.grad
    return grad.T - grad


def electric_from_strength(F: np.ndarray) -> np.ndarray:
    return np.array([F[k + 1, 0] for k in range(3)])


def magnetic_from_strength(F: np.ndarray) -> np.ndarray:
    return 0.5 * np.einsum("kij,ij->k", EPSILON, F[1:, 1:])


def invariant_f2(F: np.ndarray) -> float:
    """1/2 F_{mu nu} F^{mu nu}; equals H^2 - E^2."""

    raised = G @ F @ G
    return float(0.5 * np.sum(F * raised))


def em_lift(fields: FieldConfig, q: Any, constants: PhysicalConstants) -> Any:
    """Configuration-space potential A_i = (A_mu(x), a^p xi^a_alpha(theta) F_a(x)).

    F_a = (H, E) pairs rotations with H and boosts with E; p is ``lift_power``.
    """

    point = coords(q)
    x = point[:4]
    theta = point[4:]
    a_mu = fields.potential(x)
    strengths = jets.stack(
        [fields.magnetic(x)[k] for k in range(3)] + [fields.electric(x)[k] for k in range(3)]
    )
    xi = killing_vectors(theta)
    a_group = (xi.T @ strengths) * constants.lift_length
    return jets.stack([a_mu[mu] for mu in range(4)] + [a_group[alpha] for alpha in range(6)])


def fields_from_config(config: Mapping[str, object]) -> FieldConfig:
    """Return the :class:`FieldConfig` described by the ``fields`` section of *config*."""

    section = config.get("fields")
    if not isinstance(section, Mapping):
        return FieldConfig.none()
    kind = section.get("kind", "none")
    try:
        if kind == "none":
            return FieldConfig.none()
        if kind == "uniform":
            zero = (0.0, 0.0, 0.0)
            return FieldConfig.uniform(section.get("E", zero), section.get("H", zero))
        if kind == "plane-wave":
            return FieldConfig.plane_wave(
                float(section.get("amplitude", 0.0)),
                section.get("wave_vector", (0.0, 0.0, 1.0)),
                section.get("polarization", (1.0, 0.0, 0.0)),
            )
    except (DomainError, TypeError, ValueError) as exc:
        raise ConfigError(f"Configuration field 'fields' is invalid: {exc}") from exc
    raise ConfigError(
        f"Configuration field 'fields.kind' must be one of {', '.join(FIELD_KINDS)}"
    )
