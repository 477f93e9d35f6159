"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line (with runtime) that pytest prints in an
"acceptance criteria" section of the terminal summary.
"""

import contextlib
import math
import time

import numpy as np
import pytest

from cli_examples import EXAMPLES, golden_path, run
from synodic.conic import OrbitElements, radius_at, radius_euler_form
from synodic.core import DegenerateConfigurationError, Tolerance
from synodic.cr3bp import (
    Cr3bpSystem,
    RotState,
    Stability,
    propagate,
    routh_critical_mu,
    stability_classify,
    triangular_points,
)
from synodic.kepler import solve_kepler_bisection, solve_kepler_euler, solve_kepler_newton
from synodic.sphastro import (
    AltitudeObservation,
    SphericalTriangle,
    forward_altitudes,
    lunar_declination_extremes,
    star_fix,
    third_side_euler_cos,
    third_side_standard_cos,
)

EARTH_MOON_MU = 0.012
EARTH_E = 0.01678


@contextlib.contextmanager
def criterion(log, number, label, budget_s):
    start = time.perf_counter()
    status = "PASS"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < budget_s, f"runtime {elapsed:.2f}s exceeds {budget_s}s"
    except BaseException:
        status = "FAIL"
        raise
    finally:
        elapsed = time.perf_counter() - start
        log.append(f"[{status}] {number:2d}. {label} ({elapsed:.2f}s / {budget_s}s)")


def test_01_routh_threshold(acceptance_log):
    with criterion(acceptance_log, 1, "Routh threshold 0.0385 and eigenvalue flip within 1e-4", 1.0):
        mu_c = routh_critical_mu()
        assert round(mu_c, 4) == 0.0385
        assert stability_classify(Cr3bpSystem(mu_c - 1e-4), "L4") is Stability.STABLE
        assert stability_classify(Cr3bpSystem(mu_c + 1e-4), "L4") is Stability.UNSTABLE
        assert stability_classify(Cr3bpSystem(mu_c - 1e-4), "L5") is Stability.STABLE
        assert stability_classify(Cr3bpSystem(mu_c + 1e-4), "L5") is Stability.UNSTABLE


def test_02_earth_moon_regime(acceptance_log):
    with criterion(acceptance_log, 2, "mu=0.012: L4/L5 stable, L1/L2/L3 unstable", 1.0):
        sys = Cr3bpSystem(EARTH_MOON_MU)
        for name in ("L4", "L5"):
            assert stability_classify(sys, name) is Stability.STABLE
        for name in ("L1", "L2", "L3"):
            assert stability_classify(sys, name) is Stability.UNSTABLE


def test_03_mass_ratio_consistency(acceptance_log):
    with criterion(acceptance_log, 3, "Moon:Earth 1:81 gives mu within 2% of 0.012", 1.0):
        mu = Cr3bpSystem.from_mass_ratio(1 / 81).mu
        assert mu == pytest.approx(1 / 82, rel=1e-15)
        assert round(mu, 4) == 0.0122
        assert abs(mu - EARTH_MOON_MU) / EARTH_MOON_MU < 0.02


def test_04_jacobi_conservation(acceptance_log):
    with criterion(acceptance_log, 4, "RK4 dt=1e-3, t=50 near L4: Jacobi drift < 1e-9", 10.0):
        sys = Cr3bpSystem(EARTH_MOON_MU)
        x, y = triangular_points(sys)[0]
        traj = propagate(sys, RotState(x + 1e-3, y), 50.0, 1e-3, "rk4")
        assert traj.t[-1] == 50.0
        assert traj.jacobi_drift() < 1e-9


def test_05_kepler_sweep(acceptance_log):
    with criterion(acceptance_log, 5, "Kepler: 1000 random solves, residual < 1e-12, agreement 1e-10", 1.0):
        rng = np.random.default_rng(20240501)
        # the fixed-point map needs ~500 steps near M=0 at e=0.95
        tol = Tolerance(max_iter=1000)
        for e, M in zip(rng.uniform(0.0, 0.95, 1000), rng.uniform(0.0, 2 * math.pi, 1000)):
            reps = [solve(M, e, tol) for solve in (solve_kepler_euler, solve_kepler_newton, solve_kepler_bisection)]
            for rep in reps:
                assert rep.converged and rep.residual < 1e-12
            Es = [rep.result for rep in reps]
            assert max(Es) - min(Es) < 1e-10
        rep = solve_kepler_euler(math.pi / 2, EARTH_E, Tolerance(abs_eps=1e-12))
        assert rep.converged and rep.residual < 1e-12
        assert rep.iterations <= 6
        # bound over every mean anomaly, measured with the oracle and frozen
        worst = max(solve_kepler_euler(M, EARTH_E).iterations for M in np.linspace(0, 2 * math.pi, 2000))
        assert worst == 7


def test_06_conic_equivalence(acceptance_log):
    with criterion(acceptance_log, 6, "Euler polar form vs orbit equation over 1e4 samples < 1e-13", 1.0):
        rng = np.random.default_rng(6)
        worst, n = 0.0, 0
        while n < 10_000:
            a, b = rng.uniform(0.1, 10.0, 2)
            v = rng.uniform(0.0, 2 * math.pi)
            e = b / a - 1.0
            # b >= a keeps a the perihelion; skip the ill-conditioned sliver by the asymptote
            if e < 0.0 or 1.0 + e * math.cos(v) < 1e-2:
                continue
            ref = radius_at(OrbitElements(e, b), v)
            worst = max(worst, abs(radius_euler_form(a, b, v) - ref) / ref)
            n += 1
        assert worst < 1e-13
        for e in (0.0, 0.0549, 0.5, 1.0, 2.5):
            assert radius_at(OrbitElements(e, 1.3), math.pi / 2) == 1.3
        assert radius_euler_form(1.0, 2.0, math.pi / 2) == 2.0


def test_07_spherical_identity(acceptance_log):
    with criterion(acceptance_log, 7, "half-sum cosine rule vs law of cosines vs dot product, 1e4 triangles", 1.0):
        rng = np.random.default_rng(7)
        for ab, ac, A in rng.uniform(0.0, math.pi, (10_000, 3)):
            t = SphericalTriangle(ab, ac, A)
            b = np.array([math.sin(ab), 0.0, math.cos(ab)])
            c = np.array([math.sin(ac) * math.cos(A), math.sin(ac) * math.sin(A), math.cos(ac)])
            dot = float(b @ c)
            euler, std = third_side_euler_cos(t), third_side_standard_cos(t)
            assert abs(euler - std) < 1e-13
            assert abs(euler - dot) < 1e-13
            assert abs(std - dot) < 1e-13


def test_08_star_fix_inversion(acceptance_log):
    with criterion(acceptance_log, 8, "star fix: 1000 synthetic triples recovered to 1e-8; degenerate error", 30.0):
        rng = np.random.default_rng(8)
        done = 0
        while done < 1000:
            phi = rng.uniform(0.05, 1.5)
            dec = rng.uniform(-1.0, 1.0) * (phi - 0.05)
            h1 = rng.uniform(-math.pi, math.pi)
            gaps = tuple(rng.uniform(0.2, 1.5, 2))
            hs = forward_altitudes(phi, dec, h1, gaps)
            if max(abs(h) for h in hs) > 1.5:
                continue
            fix = star_fix(AltitudeObservation(hs, gaps))
            assert abs(fix.latitude - phi) < 1e-8
            assert abs(fix.declination - dec) < 1e-8
            assert abs(fix.first_hour_angle - h1) < 1e-8
            done += 1
        with pytest.raises(DegenerateConfigurationError):
            star_fix(AltitudeObservation((0.8, 0.8, 0.8), (0.5, 0.5)))


def test_09_lunar_declination(acceptance_log):
    with criterion(acceptance_log, 9, "lunar declination extremes within 0.3 deg of 28.5/18", 1.0):
        hi, lo = lunar_declination_extremes(math.radians(23.44), math.radians(5.145))
        assert round(math.degrees(hi), 2) == pytest.approx(28.59)
        assert round(math.degrees(lo), 2) == pytest.approx(18.30)
        assert abs(math.degrees(hi) - 28.5) <= 0.3
        assert abs(math.degrees(lo) - 18.0) <= 0.3


def test_10_integrator_order(acceptance_log):
    with criterion(acceptance_log, 10, "RK4 step-halving endpoint error ratio in [12, 20]", 10.0):
        sys = Cr3bpSystem(EARTH_MOON_MU)
        x, y = triangular_points(sys)[0]
        s0 = RotState(x + 0.05, y, vx=0.02)
        ends = [propagate(sys, s0, 10.0, h).states[-1] for h in (0.1, 0.05, 0.025)]
        ratio = np.linalg.norm(ends[0] - ends[1]) / np.linalg.norm(ends[1] - ends[2])
        assert 12.0 <= ratio <= 20.0


def test_11_cli_determinism(acceptance_log):
    with criterion(acceptance_log, 11, "CLI examples byte-identical across runs and match golden files", 5.0):
        for name, argv in EXAMPLES.items():
            first = run(argv)
            second = run(argv)
            assert first[0] == 0
            assert first[1] == second[1]
            assert first[1] == golden_path(name).read_text(encoding="utf-8")
        code, _, err = run(["kepler-solve", "--e", "1.2", "--M", "1.0"])
        assert code == 2 and "e in [0, 1)" in err
