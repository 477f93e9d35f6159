"""Circular restricted three-body problem in the rotating (synodic) frame.

Units are nondimensional: total mass 1, primary separation 1, rotation
rate 1. The primaries sit at ``(-mu, 0, 0)`` and ``(1 - mu, 0, 0)``; the
effective potential is

    Omega = (x^2 + y^2)/2 + (1 - mu)/r1 + mu/r2

and the Jacobi constant is ``C = 2 Omega - (vx^2 + vy^2 + vz^2)``. For
planar states this is ``x^2 + y^2 + 2(1-mu)/r1 + 2mu/r2 - vx^2 - vy^2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from .core import (
    DEFAULT_TOLERANCE,
    CloseApproachError,
    DivergenceError,
    DomainError,
    SingularityError,
    SynodicError,
    Tolerance,
    require_finite,
)

SINGULAR_RADIUS = 1e-12
CLOSE_APPROACH_RADIUS = 1e-6
EQUILIBRIUM_GRADIENT_LIMIT = 1e-8
STABILITY_REAL_TOL = 1e-9
SQRT3_2 = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class Cr3bpSystem:
    """Mass parameter ``mu = m2 / (m1 + m2)`` with ``0 < mu <= 1/2``."""

    mu: float

    def __post_init__(self):
        mu = require_finite("mu", self.mu)
        if not 0.0 < mu <= 0.5:
            raise DomainError(f"mass parameter must satisfy 0 < mu <= 1/2, got {mu!r}")

    @classmethod
    def from_mass_ratio(cls, ratio: float) -> "Cr3bpSystem":
        """From ``m2/m1``, e.g. ``1/81`` for the Moon and Earth."""
        ratio = require_finite("mass ratio", ratio)
        if ratio <= 0.0:
            raise DomainError(f"mass ratio must be > 0, got {ratio!r}")
        return cls(ratio / (1.0 + ratio))

    @property
    def primary1_x(self) -> float:
        return -self.mu

    @property
    def primary2_x(self) -> float:
        return 1.0 - self.mu


@dataclass(frozen=True)
class RotState:
    x: float
    y: float
    z: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z", "vx", "vy", "vz", "t"):
            require_finite(name, getattr(self, name))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.vx, self.vy, self.vz])

    @classmethod
    def from_array(cls, arr: Sequence[float], t: float = 0.0) -> "RotState":
        x, y, z, vx, vy, vz = (float(a) for a in arr)
        return cls(x, y, z, vx, vy, vz, float(t))


StateLike = Union[RotState, Sequence[float], np.ndarray]


def _unpack(s: StateLike) -> Tuple[float, float, float, float, float, float]:
    if isinstance(s, RotState):
        return s.x, s.y, s.z, s.vx, s.vy, s.vz
    x, y, z, vx, vy, vz = (float(a) for a in s)
    return x, y, z, vx, vy, vz


def primary_distances(sys: Cr3bpSystem, x: float, y: float, z: float = 0.0) -> Tuple[float, float]:
    mu = sys.mu
    r1 = math.sqrt((x + mu) ** 2 + y * y + z * z)
    r2 = math.sqrt((x - 1.0 + mu) ** 2 + y * y + z * z)
    if r1 < SINGULAR_RADIUS or r2 < SINGULAR_RADIUS:
        raise SingularityError(f"point ({x!r}, {y!r}, {z!r}) coincides with a primary")
    return r1, r2


def effective_potential(sys: Cr3bpSystem, x: float, y: float, z: float = 0.0) -> float:
    r1, r2 = primary_distances(sys, x, y, z)
    return 0.5 * (x * x + y * y) + (1.0 - sys.mu) / r1 + sys.mu / r2


def potential_gradient(sys: Cr3bpSystem, x: float, y: float, z: float = 0.0) -> np.ndarray:
    mu = sys.mu
    r1, r2 = primary_distances(sys, x, y, z)
    k1 = (1.0 - mu) / r1 ** 3
    k2 = mu / r2 ** 3
    return np.array([
        x - k1 * (x + mu) - k2 * (x - 1.0 + mu),
        y - (k1 + k2) * y,
        -(k1 + k2) * z,
    ])


def potential_hessian_planar(sys: Cr3bpSystem, x: float, y: float) -> np.ndarray:
    """Second derivatives of Omega in the plane z = 0."""
    mu = sys.mu
    r1, r2 = primary_distances(sys, x, y)
    dx1, dx2 = x + mu, x - 1.0 + mu
    a1, a2 = (1.0 - mu) / r1 ** 3, mu / r2 ** 3
    b1, b2 = 3.0 * (1.0 - mu) / r1 ** 5, 3.0 * mu / r2 ** 5
    oxx = 1.0 - a1 - a2 + b1 * dx1 ** 2 + b2 * dx2 ** 2
    oyy = 1.0 - a1 - a2 + (b1 + b2) * y * y
    oxy = (b1 * dx1 + b2 * dx2) * y
    return np.array([[oxx, oxy], [oxy, oyy]])


def _rhs(mu: float, x, y, z, vx, vy, vz):
    dx1 = x + mu
    dx2 = x - 1.0 + mu
    yz = y * y + z * z
    r1sq = dx1 * dx1 + yz
    r2sq = dx2 * dx2 + yz
    k1 = (1.0 - mu) / (r1sq * math.sqrt(r1sq))
    k2 = mu / (r2sq * math.sqrt(r2sq))
    k = k1 + k2
    return (vx, vy, vz,
            2.0 * vy + x - k1 * dx1 - k2 * dx2,
            -2.0 * vx + y - k * y,
            -k * z)


def equations_of_motion(sys: Cr3bpSystem, s: StateLike) -> np.ndarray:
    """Time derivative ``(vx, vy, vz, ax, ay, az)`` of a rotating-frame state.

    ``ax = 2 vy + dOmega/dx``, ``ay = -2 vx + dOmega/dy``, ``az = dOmega/dz``.
    """
    x, y, z, vx, vy, vz = _unpack(s)
    primary_distances(sys, x, y, z)
    return np.array(_rhs(sys.mu, x, y, z, vx, vy, vz))


def jacobi_constant(sys: Cr3bpSystem, s: StateLike) -> float:
    x, y, z, vx, vy, vz = _unpack(s)
    return 2.0 * effective_potential(sys, x, y, z) - (vx * vx + vy * vy + vz * vz)


# --- equilibria -----------------------------------------------------------

def _axis_gradient(mu: float, x: float) -> float:
    d1, d2 = x + mu, x - 1.0 + mu
    return x - (1.0 - mu) * d1 / abs(d1) ** 3 - mu * d2 / abs(d2) ** 3


def _bisect_axis(mu: float, lo: float, hi: float, tol: Tolerance) -> float:
    g_lo, g_hi = _axis_gradient(mu, lo), _axis_gradient(mu, hi)
    if not (g_lo < 0.0 < g_hi or g_hi < 0.0 < g_lo):
        raise SynodicError(f"collinear bracket [{lo!r}, {hi!r}] does not straddle a root (mu={mu!r})")
    # bisect to adjacent floats; a 2-unit bracket needs ~54 halvings
    for _ in range(max(tol.max_iter, 64)):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        g_mid = _axis_gradient(mu, mid)
        if g_mid == 0.0:
            return mid
        if (g_mid < 0.0) == (g_lo < 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi, g_hi = mid, g_mid
    return lo if abs(g_lo) <= abs(g_hi) else hi


def collinear_points(sys: Cr3bpSystem, tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[float, float, float]:
    """x-coordinates of L1, L2, L3.

    Each is the zero of ``dOmega/dx(x, 0, 0)`` inside its bracket:
    L1 between the primaries, L2 in ``(1 - mu, 2)``, L3 in ``(-2, -mu)``.
    """
    mu = sys.mu
    p1, p2 = -mu, 1.0 - mu
    # step off the poles so the end-point gradients are finite
    eps = 1e-9
    l1 = _bisect_axis(mu, p1 + eps, p2 - eps, tol)
    l2 = _bisect_axis(mu, p2 + eps, 2.0, tol)
    l3 = _bisect_axis(mu, -2.0, p1 - eps, tol)
    return l1, l2, l3


def triangular_points(sys: Cr3bpSystem) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    x = 0.5 - sys.mu
    return (x, SQRT3_2), (x, -SQRT3_2)


class Stability(enum.Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"


def planar_linearization(sys: Cr3bpSystem, x: float, y: float) -> np.ndarray:
    """4x4 Jacobian of the planar equations of motion at ``(x, y)``."""
    h = potential_hessian_planar(sys, x, y)
    return np.array([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [h[0, 0], h[0, 1], 0.0, 2.0],
        [h[1, 0], h[1, 1], -2.0, 0.0],
    ])


def point_position(sys: Cr3bpSystem, name: str, tol: Tolerance = DEFAULT_TOLERANCE) -> Tuple[float, float]:
    name = name.upper()
    if name in ("L1", "L2", "L3"):
        return collinear_points(sys, tol)["L1 L2 L3".split().index(name)], 0.0
    if name in ("L4", "L5"):
        return triangular_points(sys)[0 if name == "L4" else 1]
    raise DomainError(f"unknown libration point {name!r}; expected L1..L5")


def stability_classify(sys: Cr3bpSystem, point: Union[str, Tuple[float, float]]) -> Stability:
    """Linear stability of an equilibrium, given by name or ``(x, y)``.

    Stable when every eigenvalue of the planar linearization is purely
    imaginary (out-of-plane motion at an equilibrium always oscillates).
    """
    x, y = point_position(sys, point) if isinstance(point, str) else (float(point[0]), float(point[1]))
    grad = potential_gradient(sys, x, y)
    if np.max(np.abs(grad)) > EQUILIBRIUM_GRADIENT_LIMIT:
        raise DomainError(f"({x!r}, {y!r}) is not an equilibrium (|grad Omega| = {np.max(np.abs(grad)):.3e})")
    eig = np.linalg.eigvals(planar_linearization(sys, x, y))
    if np.all(np.abs(eig.real) < STABILITY_REAL_TOL):
        return Stability.STABLE
    return Stability.UNSTABLE


def routh_critical_mu() -> float:
    """Root of ``27 mu (1 - mu) = 1`` in (0, 1/2), about 0.03852."""
    return (1.0 - math.sqrt(23.0 / 27.0)) / 2.0


@dataclass(frozen=True)
class LagrangePointSet:
    L1: float
    L2: float
    L3: float
    L4: Tuple[float, float]
    L5: Tuple[float, float]
    stability: Dict[str, Stability] = field(default_factory=dict)

    def positions(self) -> Dict[str, Tuple[float, float]]:
        return {"L1": (self.L1, 0.0), "L2": (self.L2, 0.0), "L3": (self.L3, 0.0),
                "L4": self.L4, "L5": self.L5}


def lagrange_points(sys: Cr3bpSystem, tol: Tolerance = DEFAULT_TOLERANCE) -> LagrangePointSet:
    l1, l2, l3 = collinear_points(sys, tol)
    l4, l5 = triangular_points(sys)
    pts = {"L1": (l1, 0.0), "L2": (l2, 0.0), "L3": (l3, 0.0), "L4": l4, "L5": l5}
    stab = {name: stability_classify(sys, xy) for name, xy in pts.items()}
    return LagrangePointSet(l1, l2, l3, l4, l5, stab)


# --- propagation ----------------------------------------------------------

class Integrator(enum.Enum):
    RK4 = "rk4"
    RKF45 = "rkf45"


@dataclass(frozen=True)
class Trajectory:
    """Sampled states with the Jacobi constant at every sample."""

    t: np.ndarray
    states: np.ndarray
    jacobi: np.ndarray

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, i: int) -> RotState:
        return RotState.from_array(self.states[i], self.t[i])

    def __iter__(self) -> Iterator[RotState]:
        return (self[i] for i in range(len(self)))

    @property
    def final(self) -> RotState:
        return self[-1]

    @property
    def jacobi_log(self) -> List[Tuple[float, float]]:
        return list(zip(self.t.tolist(), self.jacobi.tolist()))

    def jacobi_drift(self) -> float:
        """Largest ``|C(t) - C(t0)| / |C(t0)|`` over the arc."""
        c0 = self.jacobi[0]
        return float(np.max(np.abs(self.jacobi - c0)) / abs(c0))


def _rk4_step(mu, s, h):
    k1 = _rhs(mu, *s)
    k2 = _rhs(mu, *[a + 0.5 * h * b for a, b in zip(s, k1)])
    k3 = _rhs(mu, *[a + 0.5 * h * b for a, b in zip(s, k2)])
    k4 = _rhs(mu, *[a + h * b for a, b in zip(s, k3)])
    return tuple(a + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
                 for a, b1, b2, b3, b4 in zip(s, k1, k2, k3, k4))


# Runge-Kutta-Fehlberg 4(5) tableau
_F_A = (
    (),
    (1 / 4,),
    (3 / 32, 9 / 32),
    (1932 / 2197, -7200 / 2197, 7296 / 2197),
    (439 / 216, -8.0, 3680 / 513, -845 / 4104),
    (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
)
_F_B5 = (16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55)
_F_B4 = (25 / 216, 0.0, 1408 / 2565, 2197 / 4104, -1 / 5, 0.0)


def _rkf45_step(mu, s, h):
    ks = []
    for row in _F_A:
        arg = [a + h * sum(c * k[i] for c, k in zip(row, ks)) for i, a in enumerate(s)]
        ks.append(_rhs(mu, *arg))
    hi = tuple(a + h * sum(b * k[i] for b, k in zip(_F_B5, ks)) for i, a in enumerate(s))
    err = tuple(h * sum((b5 - b4) * k[i] for b5, b4, k in zip(_F_B5, _F_B4, ks)) for i in range(6))
    return hi, err


def _jacobi_fast(mu, s):
    x, y, z, vx, vy, vz = s
    r1 = math.sqrt((x + mu) ** 2 + y * y + z * z)
    r2 = math.sqrt((x - 1.0 + mu) ** 2 + y * y + z * z)
    return x * x + y * y + 2.0 * (1.0 - mu) / r1 + 2.0 * mu / r2 - (vx * vx + vy * vy + vz * vz)


def propagate(sys: Cr3bpSystem, s0: RotState, t_end: float, dt: float = 1e-3,
              method: Union[Integrator, str] = Integrator.RK4, rtol: float = 1e-10,
              atol: float = 1e-10, close_approach: float = CLOSE_APPROACH_RADIUS) -> Trajectory:
    """Integrate from ``s0`` (at time ``s0.t``) to ``t_end``.

    RK4 takes fixed steps of ``dt`` (the last one shortened to land on
    ``t_end``). RKF45 uses ``dt`` as its first trial step and adapts it to
    hold the local error within ``atol + rtol |y|``. Every accepted step is
    one sample.

    Raises
    ------
    CloseApproachError
        A sample came within ``close_approach`` of either primary.
    DivergenceError
        The state became non-finite.
    """
    method = Integrator(method)
    t_end = require_finite("t_end", t_end)
    dt = require_finite("dt", dt)
    if dt <= 0.0:
        raise DomainError(f"dt must be > 0, got {dt!r}")
    if t_end <= s0.t:
        raise DomainError(f"t_end must exceed the initial time {s0.t!r}, got {t_end!r}")
    if method is Integrator.RKF45 and not (rtol > 0.0 and atol > 0.0):
        raise DomainError("rtol and atol must be > 0")

    mu = sys.mu
    s = _unpack(s0)
    r1, r2 = primary_distances(sys, *s[:3])
    times, states, jac = [s0.t], [s], [_jacobi_fast(mu, s)]

    def partial():
        return Trajectory(np.array(times), np.array(states), np.array(jac))

    def record(t_new, s_new):
        if not all(math.isfinite(v) for v in s_new):
            raise DivergenceError(f"non-finite state at t={t_new!r}", partial())
        x, y, z = s_new[:3]
        yz = y * y + z * z
        d1 = math.sqrt((x + mu) ** 2 + yz)
        d2 = math.sqrt((x - 1.0 + mu) ** 2 + yz)
        times.append(t_new)
        states.append(s_new)
        jac.append(_jacobi_fast(mu, s_new) if min(d1, d2) > SINGULAR_RADIUS else math.nan)
        if min(d1, d2) < close_approach:
            raise CloseApproachError(
                f"close approach to a primary at t={t_new!r} (r1={d1:.3e}, r2={d2:.3e})", partial())

    if min(r1, r2) < close_approach:
        raise CloseApproachError("close approach: initial state is inside the cutoff radius", partial())

    t0 = s0.t
    span = t_end - t0
    if method is Integrator.RK4:
        n = max(1, math.ceil(span / dt - 1e-9))
        t_prev = t0
        for k in range(1, n + 1):
            # time from the step index, not accumulated sums
            t_new = t_end if k == n else t0 + k * dt
            s = _rk4_step(mu, s, t_new - t_prev)
            record(t_new, s)
            t_prev = t_new
    else:
        t, h = t0, min(dt, span)
        while t < t_end:
            h = min(h, t_end - t)
            s_new, err = _rkf45_step(mu, s, h)
            scale = max(abs(e) / (atol + rtol * max(abs(a), abs(b))) for e, a, b in zip(err, s, s_new))
            if not math.isfinite(scale):
                raise DivergenceError(f"non-finite error estimate at t={t!r}", partial())
            if scale <= 1.0:
                t = t_end if t_end - (t + h) < 1e-14 * max(1.0, abs(t_end)) else t + h
                s = s_new
                record(t, s)
            factor = 5.0 if scale == 0.0 else min(5.0, max(0.2, 0.9 * scale ** -0.2))
            h *= factor
            if h < 1e-14 * max(1.0, abs(t)):
                raise DivergenceError(f"step size underflow at t={t!r}", partial())
    return partial()


def mirror_state(s: RotState) -> RotState:
    """Image under the time-reversal symmetry of the synodic equations.

    If ``s(t)`` solves the equations then so does
    ``(x, -y, z, -vx, vy, -vz)`` evaluated at ``-t``.
    """
    return RotState(s.x, -s.y, s.z, -s.vx, s.vy, -s.vz, -s.t)
