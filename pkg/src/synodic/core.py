"""Shared angle handling, tolerances and the exception hierarchy."""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


class SynodicError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SynodicError, ValueError):
    """An input violates an operation's precondition."""


class SingularityError(DomainError):
    """Evaluation point coincides with a primary mass."""


class DegenerateConfigurationError(DomainError):
    """Observations do not determine a unique answer."""


class NoFixError(SynodicError):
    """No solution exists within tolerance."""


class CloseApproachError(SynodicError):
    """Propagation came within the cutoff radius of a primary.

    The states integrated before the halt are kept on ``trajectory``.
    """

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class DivergenceError(SynodicError):
    """Propagation produced a non-finite state."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


def require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


class Angle(float):
    """A finite angle in radians.

    Behaves as a plain ``float``; construction rejects NaN and infinities.
    """

    def __new__(cls, value=0.0):
        return super().__new__(cls, require_finite("angle", value))

    @classmethod
    def from_degrees(cls, deg: float) -> "Angle":
        return cls(math.radians(require_finite("angle", deg)))

    @property
    def degrees(self) -> float:
        return math.degrees(self)

    def normalized(self) -> "Angle":
        return normalize_angle(self)

    def signed(self) -> "Angle":
        return signed_angle(self)

    def __repr__(self):
        return f"Angle({float(self)!r})"


def normalize_angle(a: float) -> Angle:
    """Map ``a`` into [0, 2*pi)."""
    a = require_finite("angle", a)
    r = a % TWO_PI
    # a tiny negative input rounds up to exactly 2*pi
    if r >= TWO_PI:
        r = 0.0
    return Angle(r)


def signed_angle(a: float) -> Angle:
    """Map ``a`` into (-pi, pi]."""
    r = float(normalize_angle(a))
    if r > math.pi:
        r -= TWO_PI
    return Angle(r)


def quadrant_cos(a: float) -> float:
    """Cosine with the argument reduced by float multiples of pi/2.

    ``quadrant_cos(k * (math.pi / 2))`` is exactly 0 or +-1 for small
    integers ``k``, so apsides and latus-rectum points of an orbit come out
    exact. Elsewhere it agrees with ``math.cos`` to ~1e-16 absolute.
    """
    a = require_finite("angle", a)
    k = round(a / HALF_PI)
    r = a - k * HALF_PI
    q = k % 4
    if q == 0:
        return math.cos(r)
    if q == 1:
        return -math.sin(r)
    if q == 2:
        return -math.cos(r)
    return math.sin(r)


@dataclass(frozen=True)
class Tolerance:
    """Stopping thresholds shared by the iterative solvers."""

    abs_eps: float = 1e-12
    rel_eps: float = 1e-12
    max_iter: int = 200

    def __post_init__(self):
        if not (math.isfinite(self.abs_eps) and self.abs_eps > 0):
            raise DomainError(f"abs_eps must be > 0, got {self.abs_eps!r}")
        if not (math.isfinite(self.rel_eps) and self.rel_eps > 0):
            raise DomainError(f"rel_eps must be > 0, got {self.rel_eps!r}")
        if isinstance(self.max_iter, bool) or int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise DomainError(f"max_iter must be an integer >= 1, got {self.max_iter!r}")


DEFAULT_TOLERANCE = Tolerance()
