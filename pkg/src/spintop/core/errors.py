"""Exception hierarchy shared by the geometry, wave and dynamics modules."""

from __future__ import annotations

from typing import Any

__all__ = [
    "SpintopError",
    "ConfigError",
    "DomainError",
    "SingularChart",
    "SingularMetric",
    "UnsupportedRep",
    "NonpositiveWeylFactor",
    "NonpositiveGauge",
    "NonpositiveMass",
    "ZeroAmplitude",
    "ImaginaryRadicand",
    "OffShellMomentum",
    "TooShort",
]


class SpintopError(RuntimeError):
    """Base error carrying the CLI exit code it maps to."""

    exit_code: int

    def __init__(self, message: str, *, exit_code: int = 1) -> None:
        super().__init__(message)
        self.exit_code = exit_code


class ConfigError(SpintopError):
    """Raised when a run configuration cannot be parsed or is inconsistent."""

    def __init__(self, message: str) -> None:
        super().__init__(message, exit_code=2)


class DomainError(SpintopError):
    """Raised for non-finite or otherwise out-of-domain numeric input."""


class SingularChart(SpintopError):
    """The Euler-angle chart degenerates: the Killing-vector matrix is not invertible."""

    def __init__(self, det: float, angles: Any = None) -> None:
        super().__init__(f"Euler-angle chart is singular (det xi = {det:.3e})")
        self.det = det
        self.angles = angles


class SingularMetric(SpintopError):
    """The metric cannot be inverted at the requested point."""

    def __init__(self, message: str = "metric is singular at the evaluation point") -> None:
        super().__init__(message)


class UnsupportedRep(SpintopError):
    def __init__(self, two_u: int, two_v: int) -> None:
        super().__init__(
            f"Unsupported representation label (2u, 2v) = ({two_u}, {two_v}); "
            "both entries must be integers between 0 and 3"
        )
        self.two_u = two_u
        self.two_v = two_v


class NonpositiveWeylFactor(SpintopError):
    def __init__(self, chi: float) -> None:
        super().__init__(f"Weyl factor must be positive, got {chi!r}")
        self.chi = chi


class NonpositiveGauge(SpintopError):
    def __init__(self, rho: float) -> None:
        super().__init__(f"Gauge factor must be positive, got {rho!r}")
        self.rho = rho


class NonpositiveMass(SpintopError):
    def __init__(self, mass: float) -> None:
        super().__init__(f"Mass must be positive, got {mass!r}")
        self.mass = mass


class ZeroAmplitude(SpintopError):
    """The wave field vanishes at the point, so its phase gradient is undefined."""

    def __init__(self, amplitude: float, point: Any = None) -> None:
        super().__init__(f"Wave amplitude {amplitude:.3e} is below the node threshold")
        self.amplitude = amplitude
        self.point = point


class ImaginaryRadicand(SpintopError):
    """A Lagrangian square root was requested along a direction with negative radicand."""

    def __init__(self, radicand: float) -> None:
        super().__init__(f"Lagrangian radicand is negative ({radicand:.6e})")
        self.radicand = radicand


class OffShellMomentum(SpintopError):
    def __init__(self, shell: float) -> None:
        super().__init__(f"Momentum is off the mass shell (p.p + m^2 c^2 = {shell:.3e})")
        self.shell = shell


class TooShort(SpintopError):
    def __init__(self, samples: int, required: int) -> None:
        super().__init__(f"Trajectory has {samples} samples; at least {required} are required")
        self.samples = samples
        self.required = required
