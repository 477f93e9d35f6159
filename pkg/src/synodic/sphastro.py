"""Spherical astronomy: the spherical cosine rule, the three-altitude star
fix, meridian-transit altitude and lunar declination extremes.

Altitudes are geometric; refraction is ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .core import (
    DEFAULT_TOLERANCE,
    TWO_PI,
    Angle,
    DegenerateConfigurationError,
    DomainError,
    NoFixError,
    Tolerance,
    require_finite,
    signed_angle,
)

HALF_PI = 0.5 * math.pi

# forward-model altitude misfit above which a star fix is rejected
FIX_RESIDUAL_LIMIT = 1e-9


def _in_closed(name: str, value: float, lo: float, hi: float) -> float:
    value = require_finite(name, value)
    if not lo <= value <= hi:
        raise DomainError(f"{name} must lie in [{lo:g}, {hi:g}], got {value!r}")
    return value


@dataclass(frozen=True)
class SphericalTriangle:
    """Two sides meeting at vertex A and the angle between them (radians)."""

    side_AB: float
    side_AC: float
    angle_A: float

    def __post_init__(self):
        _in_closed("side_AB", self.side_AB, 0.0, math.pi)
        _in_closed("side_AC", self.side_AC, 0.0, math.pi)
        _in_closed("angle_A", self.angle_A, 0.0, math.pi)


def _arccos(c: float) -> Angle:
    return Angle(math.acos(min(1.0, max(-1.0, c))))


def third_side_euler_cos(t: SphericalTriangle) -> float:
    """Cosine of side BC as a sum of half-sum and half-difference terms."""
    plus = math.cos(t.side_AB + t.side_AC)
    minus = math.cos(t.side_AB - t.side_AC)
    cA = math.cos(t.angle_A)
    return (plus + minus) / 2 + (cA * minus - cA * plus) / 2


def third_side_euler(t: SphericalTriangle) -> Angle:
    return _arccos(third_side_euler_cos(t))


def third_side_standard_cos(t: SphericalTriangle) -> float:
    return (math.cos(t.side_AB) * math.cos(t.side_AC)
            + math.cos(t.angle_A) * math.sin(t.side_AB) * math.sin(t.side_AC))


def third_side_standard(t: SphericalTriangle) -> Angle:
    """Side BC by the usual spherical law of cosines."""
    return _arccos(third_side_standard_cos(t))


@dataclass(frozen=True)
class AltitudeObservation:
    """Three altitudes of one star and the hour-angle gaps between them.

    ``hour_angle_gaps[0]`` is the angle APB at the pole between the first
    and second sighting, ``hour_angle_gaps[1]`` is BPC. For a star the gap
    equals the elapsed sidereal time expressed as an angle.
    """

    altitudes: Tuple[float, float, float]
    hour_angle_gaps: Tuple[float, float]

    def __post_init__(self):
        if len(self.altitudes) != 3 or len(self.hour_angle_gaps) != 2:
            raise DomainError("need exactly three altitudes and two hour-angle gaps")
        for h in self.altitudes:
            h = require_finite("altitude", h)
            if not -HALF_PI < h < HALF_PI:
                raise DomainError(f"altitude must lie in (-pi/2, pi/2), got {h!r}")
        for g in self.hour_angle_gaps:
            g = require_finite("hour-angle gap", g)
            if not 0.0 < g < TWO_PI:
                raise DomainError(f"hour-angle gap must lie in (0, 2 pi), got {g!r}")

    @property
    def hour_angle_offsets(self) -> Tuple[float, float, float]:
        g1, g2 = self.hour_angle_gaps
        return (0.0, g1, g1 + g2)


@dataclass(frozen=True)
class StarFix:
    latitude: Angle
    declination: Angle
    first_hour_angle: Angle

    def swapped(self) -> "StarFix":
        """The mirror solution with latitude and declination exchanged.

        Altitude depends on latitude and declination symmetrically, so the
        observations fit this solution equally well.
        """
        return StarFix(self.declination, self.latitude, self.first_hour_angle)


def altitude(latitude: float, declination: float, hour_angle: float) -> float:
    """Altitude of a star from ``sin h = sin phi sin dec + cos phi cos dec cos H``."""
    s = (math.sin(latitude) * math.sin(declination)
         + math.cos(latitude) * math.cos(declination) * math.cos(hour_angle))
    return math.asin(min(1.0, max(-1.0, s)))


def forward_altitudes(latitude: float, declination: float, first_hour_angle: float,
                      hour_angle_gaps: Sequence[float]) -> Tuple[float, float, float]:
    g1, g2 = hour_angle_gaps
    return tuple(altitude(latitude, declination, first_hour_angle + o) for o in (0.0, g1, g1 + g2))


def _residuals(x, sin_h, offsets):
    phi, dec, h1 = x
    H = h1 + offsets
    sp, cp, sd, cd = math.sin(phi), math.cos(phi), math.sin(dec), math.cos(dec)
    cH = np.cos(H)
    f = sp * sd + cp * cd * cH - sin_h
    jac = np.column_stack([
        cp * sd - sp * cd * cH,
        sp * cd - cp * sd * cH,
        -cp * cd * np.sin(H),
    ])
    return f, jac


def star_fix(obs: AltitudeObservation, tol: Tolerance = DEFAULT_TOLERANCE) -> StarFix:
    """Recover latitude, declination and first hour angle from three altitudes.

    Writing ``A = cos phi cos dec`` and ``B = sin phi sin dec``, each sighting
    gives ``sin h_i = B + A cos H1 cos o_i - A sin H1 sin o_i`` with known
    offsets ``o_i``, which is linear in ``(B, A cos H1, A sin H1)``. Solving
    that 3x3 system yields ``H1`` and ``cos(phi -+ dec) = A +- B`` in closed
    form; a few Newton steps on the original residuals then polish the result.

    The returned fix has ``latitude >= 0`` and ``latitude >= |declination|``,
    with the hour angle in (-pi, pi]. :meth:`StarFix.swapped` gives the other
    branch when the star is known to be farther from the equator than the
    observer.

    Raises
    ------
    DegenerateConfigurationError
        All altitudes equal (hour angle indeterminate) or two sightings share
        an hour angle.
    NoFixError
        The altitudes are inconsistent with any star position.
    """
    sin_h = np.sin(np.asarray(obs.altitudes, dtype=float))
    offsets = np.asarray(obs.hour_angle_offsets)
    if np.ptp(sin_h) < tol.abs_eps:
        raise DegenerateConfigurationError(
            "all three altitudes are equal: star at the celestial pole or observer at a pole")
    mat = np.column_stack([np.ones(3), np.cos(offsets), -np.sin(offsets)])
    # det = 4 sin(g1/2) sin(g2/2) sin((g1+g2)/2) up to sign
    if abs(np.linalg.det(mat)) < 1e-9:
        raise DegenerateConfigurationError("two sightings are at the same hour angle")
    B, P, S = np.linalg.solve(mat, sin_h)
    A = math.hypot(P, S)
    if A < tol.abs_eps:
        raise DegenerateConfigurationError("altitude variation vanishes; hour angle indeterminate")
    h1 = math.atan2(S, P)
    c_diff, c_sum = A + B, A - B
    slack = 1e-9
    if not (-1.0 - slack <= c_sum and c_diff <= 1.0 + slack):
        raise NoFixError("altitudes are inconsistent with a fixed star")
    d = math.acos(min(1.0, max(-1.0, c_diff)))
    s = math.acos(min(1.0, max(-1.0, c_sum)))
    x = np.array([(s + d) / 2, (s - d) / 2, h1])

    f, jac = _residuals(x, sin_h, offsets)
    best = np.max(np.abs(f))
    for _ in range(tol.max_iter):
        try:
            step = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            break
        trial = x + step
        f_new, jac_new = _residuals(trial, sin_h, offsets)
        err = np.max(np.abs(f_new))
        if not err < best:
            break
        x, f, jac, best = trial, f_new, jac_new, err
        if np.all(np.abs(step) <= tol.abs_eps + tol.rel_eps * np.abs(x)):
            break

    phi, dec, h1 = float(x[0]), float(x[1]), float(x[2])
    if not (0.0 <= phi <= HALF_PI + slack and abs(dec) <= HALF_PI + slack):
        raise NoFixError("no star position within the valid latitude/declination range")
    fitted = forward_altitudes(phi, dec, h1, obs.hour_angle_gaps)
    misfit = max(abs(a - b) for a, b in zip(fitted, obs.altitudes))
    if misfit > FIX_RESIDUAL_LIMIT:
        raise NoFixError(f"best fix misses the observed altitudes by {misfit:.3e} rad")
    return StarFix(Angle(min(phi, HALF_PI)), Angle(max(-HALF_PI, min(dec, HALF_PI))), signed_angle(h1))


def transit_altitude(latitude: float, declination: float) -> Angle:
    """Altitude at upper meridian transit, where the altitude peaks."""
    latitude = _in_closed("latitude", latitude, -HALF_PI, HALF_PI)
    declination = _in_closed("declination", declination, -HALF_PI, HALF_PI)
    return Angle(HALF_PI - abs(latitude - declination))


def lunar_declination_extremes(obliquity: float, inclination: float) -> Tuple[Angle, Angle]:
    """Monthly declination amplitude of the Moon at the two nodal extremes.

    Returns ``(obliquity + inclination, |obliquity - inclination|)``: the
    amplitude with the ascending node at the vernal equinox, and half a
    nodal cycle later.
    """
    obliquity = require_finite("obliquity", obliquity)
    inclination = require_finite("inclination", inclination)
    for name, val in (("obliquity", obliquity), ("inclination", inclination)):
        if not 0.0 <= val < HALF_PI:
            raise DomainError(f"{name} must lie in [0, pi/2), got {val!r}")
    return Angle(obliquity + inclination), Angle(abs(obliquity - inclination))
