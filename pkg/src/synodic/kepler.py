"""Anomaly conversions and solvers for Kepler's equation ``E - e sin E = M``.

Anomalies are measured from periapse. To express an eccentric anomaly
from aphelion instead, use ``pi - E``.

Three solvers are provided so each can be checked against the others:

* :func:`solve_kepler_euler` -- the successive approximations
  ``E_n = M + e sin E_{n-1}`` from ``E_0 = M``. Expanding the recursion
  gives the nested series ``M + e sin(M + e sin(M + ...))`` term by term,
  so no separate series evaluator exists.
* :func:`solve_kepler_newton` -- safeguarded Newton-Raphson.
* :func:`solve_kepler_bisection` -- bisection on ``[M - e, M + e]``.

None of them raise on slow convergence. They return a :class:`SolveReport`
with ``converged=False`` that holds the last iterate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import (
    DEFAULT_TOLERANCE,
    TWO_PI,
    Angle,
    DomainError,
    Tolerance,
    normalize_angle,
    require_finite,
)


class SolveMethod(enum.Enum):
    EULER_FIXED_POINT = "euler"
    NEWTON = "newton"
    BISECTION = "bisection"


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one Kepler solve.

    ``residual`` is ``|E - e sin E - M|`` at ``result``.
    """

    result: Angle
    iterations: int
    residual: float
    method: SolveMethod
    converged: bool = True


def _check_ecc(e: float) -> float:
    e = require_finite("eccentricity", e)
    if not 0.0 <= e < 1.0:
        raise DomainError(f"eccentricity must satisfy e in [0, 1), got {e!r}")
    return e


def kepler_residual(E: float, e: float, M: float) -> float:
    return abs(E - e * math.sin(E) - M)


def mean_from_time(t: float, period: float) -> Angle:
    """Mean anomaly ``2 pi t / T`` for time ``t`` since periapse."""
    t = require_finite("t", t)
    period = require_finite("period", period)
    if period <= 0.0:
        raise DomainError(f"period must be > 0, got {period!r}")
    return normalize_angle(TWO_PI * t / period)


def _done(step: float, residual: float, tol: Tolerance) -> bool:
    return step < tol.abs_eps and residual < 10.0 * tol.abs_eps


def solve_kepler_euler(M: float, e: float, tol: Tolerance = DEFAULT_TOLERANCE) -> SolveReport:
    """Fixed-point iteration ``E_n = M + e sin E_{n-1}`` starting at ``E_0 = M``.

    Stops once the step between successive iterates is below
    ``tol.abs_eps`` and the residual is below ``10 * tol.abs_eps``.
    Convergence is linear with rate ``e |cos E|``, so it slows badly as
    ``e -> 1``; when ``tol.max_iter`` runs out the report carries the last
    iterate and ``converged=False``.
    """
    e = _check_ecc(e)
    M = float(normalize_angle(M))
    prev = M
    E = M
    residual = kepler_residual(E, e, M)
    for n in range(1, tol.max_iter + 1):
        E = M + e * math.sin(prev)
        residual = kepler_residual(E, e, M)
        if _done(abs(E - prev), residual, tol):
            return SolveReport(Angle(E), n, residual, SolveMethod.EULER_FIXED_POINT)
        prev = E
    return SolveReport(Angle(E), tol.max_iter, residual, SolveMethod.EULER_FIXED_POINT, converged=False)


def solve_kepler_newton(M: float, e: float, tol: Tolerance = DEFAULT_TOLERANCE) -> SolveReport:
    """Newton-Raphson from ``E_0 = M + e sin M``.

    The root always lies in ``[M - e, M + e]``; iterates that overshoot
    that bracket are clamped back onto it. For ``e <= 0.95`` this needs at
    most 8 iterations.
    """
    e = _check_ecc(e)
    M = float(normalize_angle(M))
    lo, hi = M - e, M + e
    E = M + e * math.sin(M)
    residual = kepler_residual(E, e, M)
    for n in range(1, tol.max_iter + 1):
        f = E - e * math.sin(E) - M
        nxt = min(max(E - f / (1.0 - e * math.cos(E)), lo), hi)
        step = abs(nxt - E)
        E = nxt
        residual = kepler_residual(E, e, M)
        if _done(step, residual, tol):
            return SolveReport(Angle(E), n, residual, SolveMethod.NEWTON)
    return SolveReport(Angle(E), tol.max_iter, residual, SolveMethod.NEWTON, converged=False)


def solve_kepler_bisection(M: float, e: float, tol: Tolerance = DEFAULT_TOLERANCE) -> SolveReport:
    """Bisection on ``f(E) = E - e sin E - M`` over ``[M - e, M + e]``.

    ``f`` is non-decreasing, so the bracket always holds exactly one root.
    """
    e = _check_ecc(e)
    M = float(normalize_angle(M))
    lo, hi = M - e, M + e
    E = M
    residual = kepler_residual(E, e, M)
    if residual == 0.0:
        return SolveReport(Angle(E), 0, 0.0, SolveMethod.BISECTION)
    n = 0
    for n in range(1, tol.max_iter + 1):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            # bracket is down to adjacent floats
            break
        f = mid - e * math.sin(mid) - M
        if f > 0.0:
            hi = mid
        else:
            lo = mid
        E = mid
        residual = abs(f)
        if residual == 0.0 or (hi - lo < tol.abs_eps and residual < tol.abs_eps):
            return SolveReport(Angle(E), n, residual, SolveMethod.BISECTION)
    return SolveReport(Angle(E), n, residual, SolveMethod.BISECTION, converged=residual < tol.abs_eps)


SOLVERS = {
    SolveMethod.EULER_FIXED_POINT: solve_kepler_euler,
    SolveMethod.NEWTON: solve_kepler_newton,
    SolveMethod.BISECTION: solve_kepler_bisection,
}


def solve_kepler(M: float, e: float, method: SolveMethod | str = SolveMethod.EULER_FIXED_POINT,
                 tol: Tolerance = DEFAULT_TOLERANCE) -> SolveReport:
    return SOLVERS[SolveMethod(method)](M, e, tol)


def eccentric_to_true(E: float, e: float) -> Angle:
    """True anomaly from eccentric anomaly, result in [0, 2 pi)."""
    e = _check_ecc(e)
    E = require_finite("E", E)
    half = 0.5 * E
    v = 2.0 * math.atan2(math.sqrt(1.0 + e) * math.sin(half), math.sqrt(1.0 - e) * math.cos(half))
    return normalize_angle(v)


def true_to_eccentric(v: float, e: float) -> Angle:
    """Eccentric anomaly from true anomaly, result in [0, 2 pi)."""
    e = _check_ecc(e)
    v = require_finite("v", v)
    half = 0.5 * v
    E = 2.0 * math.atan2(math.sqrt(1.0 - e) * math.sin(half), math.sqrt(1.0 + e) * math.cos(half))
    return normalize_angle(E)


def eccentric_to_mean(E: float, e: float) -> Angle:
    e = _check_ecc(e)
    E = require_finite("E", E)
    return normalize_angle(E - e * math.sin(E))


@dataclass(frozen=True)
class AnomalySet:
    """Mean, eccentric and true anomaly of one elliptical position."""

    mean: Angle
    eccentric: Angle
    true_anom: Angle
    eccentricity: float

    def __post_init__(self):
        _check_ecc(self.eccentricity)
        r = kepler_residual(self.eccentric, self.eccentricity, self.mean)
        # E near 2*pi may pair with M normalized near 0
        r = min(r, abs(r - TWO_PI))
        if r > 1e-10:
            raise DomainError(f"anomalies violate Kepler's equation (residual {r:.3e})")

    @classmethod
    def from_mean(cls, M: float, e: float, method: SolveMethod | str = SolveMethod.NEWTON,
                  tol: Tolerance = DEFAULT_TOLERANCE) -> "AnomalySet":
        rep = solve_kepler(M, e, method, tol)
        if not rep.converged:
            raise DomainError(f"Kepler solve did not converge (residual {rep.residual:.3e})")
        return cls(normalize_angle(M), rep.result, eccentric_to_true(rep.result, e), float(e))

    @classmethod
    def from_eccentric(cls, E: float, e: float) -> "AnomalySet":
        E = normalize_angle(E)
        return cls(eccentric_to_mean(E, e), E, eccentric_to_true(E, e), float(e))

    @classmethod
    def from_true(cls, v: float, e: float) -> "AnomalySet":
        E = true_to_eccentric(v, e)
        return cls(eccentric_to_mean(E, e), E, normalize_angle(v), float(e))
