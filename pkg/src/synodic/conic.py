"""Conic-section orbit geometry.

Orbits are described by eccentricity ``e`` and semi-latus rectum ``p``,
which stay well defined for every conic including the parabola.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .core import HALF_PI, Angle, DomainError, quadrant_cos, require_finite

CLASSIFY_EPS = 1e-12


class ConicClass(enum.Enum):
    CIRCLE = "circle"
    ELLIPSE = "ellipse"
    PARABOLA = "parabola"
    HYPERBOLA = "hyperbola"


def classify(e: float) -> ConicClass:
    e = require_finite("eccentricity", e)
    if e < 0.0:
        raise DomainError(f"eccentricity must be >= 0, got {e!r}")
    if e < CLASSIFY_EPS:
        return ConicClass.CIRCLE
    if abs(e - 1.0) < CLASSIFY_EPS:
        return ConicClass.PARABOLA
    return ConicClass.ELLIPSE if e < 1.0 else ConicClass.HYPERBOLA


@dataclass(frozen=True)
class OrbitElements:
    """Shape of a two-body orbit.

    Attributes
    ----------
    e : float
        Eccentricity, ``e >= 0``.
    p : float
        Semi-latus rectum, ``p > 0``.
    """

    e: float
    p: float

    def __post_init__(self):
        classify(self.e)
        p = require_finite("p", self.p)
        if p <= 0.0:
            raise DomainError(f"semi-latus rectum must be > 0, got {p!r}")

    @classmethod
    def from_semimajor(cls, a: float, e: float) -> "OrbitElements":
        """Build from semimajor axis; ``a > 0`` for both ellipse and hyperbola."""
        a = require_finite("a", a)
        if a <= 0.0:
            raise DomainError(f"semimajor axis must be > 0, got {a!r}")
        kind = classify(e)
        if kind is ConicClass.PARABOLA:
            raise DomainError("semimajor axis is undefined for a parabola; use from_periapsis")
        return cls(e, a * abs(1.0 - e * e))

    @classmethod
    def from_periapsis(cls, q: float, e: float) -> "OrbitElements":
        q = require_finite("q", q)
        if q <= 0.0:
            raise DomainError(f"periapsis distance must be > 0, got {q!r}")
        return cls(e, q * (1.0 + e))

    @property
    def conic_class(self) -> ConicClass:
        return classify(self.e)

    @property
    def a(self) -> Optional[float]:
        """Semimajor axis, positive for ellipse and hyperbola, None for a parabola."""
        if self.conic_class is ConicClass.PARABOLA:
            return None
        return self.p / abs(1.0 - self.e * self.e)

    @property
    def q(self) -> float:
        return self.p / (1.0 + self.e)

    @property
    def Q(self) -> Optional[float]:
        """Apoapsis distance; None for open orbits."""
        if self.e >= 1.0 - CLASSIFY_EPS:
            return None
        return self.p / (1.0 - self.e)


@dataclass(frozen=True)
class PlanarState:
    """Perifocal position (and optionally velocity) at one true anomaly."""

    r: float
    v_true: Angle
    x: float
    y: float
    dx_dt: Optional[float] = None
    dy_dt: Optional[float] = None

    @property
    def speed(self) -> Optional[float]:
        if self.dx_dt is None:
            return None
        return math.hypot(self.dx_dt, self.dy_dt)

    @property
    def angular_momentum(self) -> Optional[float]:
        if self.dx_dt is None:
            return None
        return self.x * self.dy_dt - self.y * self.dx_dt


def radius_at(elements: OrbitElements, v: float) -> float:
    """Orbit equation ``r = p / (1 + e cos v)``."""
    denom = 1.0 + elements.e * quadrant_cos(v)
    if denom <= 0.0:
        raise DomainError(f"true anomaly {v!r} lies beyond the asymptote (1 + e cos v = {denom:.3e} <= 0)")
    return elements.p / denom


def radius_euler_form(a_peri: float, b_latus: float, v: float) -> float:
    """Polar orbit equation written as ``r = a b / (a + (b - a) cos v)``.

    ``a_peri`` is the perihelion distance and ``b_latus`` the semi-latus
    rectum, so this is the orbit equation with ``p = b`` and
    ``e = b / a - 1``; ``b = 2 a`` is the parabola.
    """
    a_peri = require_finite("a_peri", a_peri)
    b_latus = require_finite("b_latus", b_latus)
    cv = quadrant_cos(v)
    if a_peri <= 0.0 or b_latus <= 0.0:
        raise DomainError("perihelion distance and semi-latus rectum must be > 0")
    denom = a_peri + (b_latus - a_peri) * cv
    if denom <= 0.0:
        raise DomainError(f"true anomaly {v!r} lies beyond the asymptote")
    return a_peri * b_latus / denom


def state_at(elements: OrbitElements, v: float, gm: Optional[float] = 1.0) -> PlanarState:
    """Perifocal position and velocity at true anomaly ``v``.

    Velocity uses ``dx/dt = -sqrt(gm/p) sin v`` and
    ``dy/dt = sqrt(gm/p) (e + cos v)``; pass ``gm=None`` for position only.
    """
    r = radius_at(elements, v)
    c, s = quadrant_cos(v), quadrant_cos(v - HALF_PI)
    if gm is None:
        return PlanarState(r, Angle(v), r * c, r * s)
    gm = require_finite("gm", gm)
    if gm <= 0.0:
        raise DomainError(f"gravitational parameter must be > 0, got {gm!r}")
    k = math.sqrt(gm / elements.p)
    return PlanarState(r, Angle(v), r * c, r * s, -k * s, k * (elements.e + c))
