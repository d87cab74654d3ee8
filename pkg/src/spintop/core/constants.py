"""Physical constants and their derivation from configuration mappings."""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping
from dataclasses import dataclass, replace

from .errors import ConfigError, NonpositiveMass

logger = logging.getLogger(__name__)

__all__ = [
    "PhysicalConstants",
    "DEFAULT_CONSTANTS",
    "PRINTED_CURVATURE_TIMES_A2",
    "conformal_gamma2",
    "a_from_mass",
    "constants_from_config",
]

PRINTED_CURVATURE_TIMES_A2 = 6.0
"""Printed value of R·a² for the configuration space; reported, never assumed."""


def conformal_gamma2(n: int) -> float:
    """Return the conformal coupling (n - 2) / (4 (n - 1))."""

    return (n - 2) / (4.0 * (n - 1))


def a_from_mass(m: float, *, hbar: float = 1.0, c: float = 1.0, gamma2: float = 2.0 / 9.0) -> float:
    """Return the top length scale a = (hbar / m c) sqrt(3 (1 + 4 gamma^2) / 2)."""

    if not (m > 0.0) or not math.isfinite(m):
        raise NonpositiveMass(m)
    return (hbar / (m * c)) * math.sqrt(1.5 * (1.0 + 4.0 * gamma2))


@dataclass(frozen=True, slots=True)
class PhysicalConstants:
    """Constants of the relativistic top.  Natural units (hbar = c = 1) by default.

    ``a`` defaults to the value fixed by the mass; ``gamma2`` defaults to the
    conformal coupling for dimension ``n``.  ``lift_power`` selects the power of
    ``a`` in the group components of the electromagnetic potential.
    """

    hbar: float = 1.0
    c: float = 1.0
    m: float = 1.0
    e: float = 0.3
    a: float | None = None
    gamma2: float | None = None
    n: int = 10
    lift_power: int = 2

    def __post_init__(self) -> None:
        if self.gamma2 is None:
            object.__setattr__(self, "gamma2", conformal_gamma2(self.n))
        if self.a is None:
            object.__setattr__(
                self,
                "a",
                a_from_mass(self.m, hbar=self.hbar, c=self.c, gamma2=self.gamma2),
            )
        if not (self.a > 0.0):
            raise ValueError(f"length scale a must be positive, got {self.a!r}")
        if self.lift_power not in (1, 2):
            raise ValueError("lift_power must be 1 or 2")

    @property
    def amplitude_power(self) -> float:
        """Exponent k in |psi| = chi^-k, i.e. (n - 2) / 2."""

        return (self.n - 2) / 2.0

    @property
    def lift_length(self) -> float:
        return self.a**self.lift_power

    @property
    def coupling(self) -> float:
        """Coefficient multiplying E and H inside the Delta_J brackets."""

        return (self.e / self.c) * self.a ** (self.lift_power - 1)

    def with_gamma2(self, gamma2: float) -> "PhysicalConstants":
        return replace(self, gamma2=gamma2)

    def with_a(self, a: float) -> "PhysicalConstants":
        return replace(self, a=a)


DEFAULT_CONSTANTS = PhysicalConstants()


def constants_from_config(config: Mapping[str, object]) -> PhysicalConstants:
    """Return :class:`PhysicalConstants` derived from the ``constants`` section of *config*."""

    section = config.get("constants")
    if not isinstance(section, Mapping):
        return DEFAULT_CONSTANTS

    def _number(key: str, default: float) -> float:
        raw = section.get(key, default)
        if isinstance(raw, bool) or not isinstance(raw, (int, float)):
            raise ConfigError(f"Configuration field 'constants.{key}' must be a number")
        return float(raw)

    n = section.get("n", 10)
    if isinstance(n, bool) or not isinstance(n, int) or n < 3:
        raise ConfigError("Configuration field 'constants.n' must be an integer >= 3")

    explicit_a = section.get("a")
    derive = bool(section.get("derive_a_from_mass", explicit_a is None))
    if derive == (explicit_a is not None):
        raise ConfigError(
            "Exactly one of 'constants.a' and 'constants.derive_a_from_mass' must be supplied"
        )

    gamma2_raw = section.get("gamma2")
    gamma2 = None if gamma2_raw is None else _number("gamma2", 0.0)
    if gamma2 is not None and gamma2 != conformal_gamma2(n):
        logger.warning(
            "EVENT=GAMMA2_OVERRIDE VALUE=%r CONFORMAL=%r", gamma2, conformal_gamma2(n)
        )

    lift_power = section.get("lift_power", 2)
    if lift_power not in (1, 2):
        raise ConfigError("Configuration field 'constants.lift_power' must be 1 or 2")

    try:
        return PhysicalConstants(
            hbar=_number("hbar", 1.0),
            c=_number("c", 1.0),
            m=_number("m", 1.0),
            e=_number("e", 0.3),
            a=None if derive else _number("a", 1.0),
            gamma2=gamma2,
            n=n,
            lift_power=int(lift_power),
        )
    except (NonpositiveMass, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
