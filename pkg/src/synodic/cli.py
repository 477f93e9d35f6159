"""Command-line front end.

Every subcommand writes CSV (header row, comma separator, LF endings) to
stdout or ``--output``. Angles are read and written in degrees unless
``--radians`` is given. Real numbers are printed with 15 significant
digits.

Exit status: 0 success, 1 computation failure (close approach, no fix,
divergence), 2 precondition violation, 64 command-line usage error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Iterable, List, Sequence

from . import conic, cr3bp, kepler, sphastro
from .core import DomainError, SynodicError, Tolerance

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_DOMAIN = 2
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}\n")


def fmt(value) -> str:
    """Fixed 15-significant-digit rendering; ints and strings pass through."""
    if isinstance(value, str):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    value = float(value)
    if value == 0.0:
        value = 0.0  # drop the sign of -0.0
    return f"{value:.14e}"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _angle_in(args, value: float) -> float:
    return value if args.radians else math.radians(value)


def _angle_out(args, value: float) -> float:
    return value if args.radians else math.degrees(value)


def _tolerance(args) -> Tolerance:
    return Tolerance(abs_eps=args.abs_eps, max_iter=args.max_iter)


def cmd_kepler_solve(args) -> str:
    if not 0.0 <= args.e < 1.0:
        raise DomainError(f"eccentricity must satisfy e in [0, 1), got {args.e!r}")
    rep = kepler.solve_kepler(_angle_in(args, args.M), args.e, args.method, _tolerance(args))
    if not rep.converged:
        print(f"warning: {args.method} did not converge in {rep.iterations} iterations; "
              f"last iterate has residual {rep.residual:.3e}", file=sys.stderr)
    return csv_text(["E", "iterations", "residual"],
                    [(_angle_out(args, rep.result), rep.iterations, rep.residual)])


def _elements(args) -> conic.OrbitElements:
    given = [n for n in ("p", "a", "q") if getattr(args, n) is not None]
    if len(given) != 1:
        raise DomainError("give exactly one of --p, --a, --q")
    if args.p is not None:
        return conic.OrbitElements(args.e, args.p)
    if args.a is not None:
        return conic.OrbitElements.from_semimajor(args.a, args.e)
    return conic.OrbitElements.from_periapsis(args.q, args.e)


def _grid(start: float, stop: float, step: float) -> List[float]:
    if not step > 0.0:
        raise DomainError(f"--v-step must be > 0, got {step!r}")
    if stop < start:
        raise DomainError("--v-stop must not be below --v-start")
    n = int(math.floor((stop - start) / step + 1e-9))
    if n > 10_000_000:
        raise DomainError("true-anomaly grid too large")
    return [start + k * step for k in range(n + 1)]


def cmd_orbit_table(args) -> str:
    el = _elements(args)
    rows, skipped = [], 0
    for v in _grid(args.v_start, args.v_stop, args.v_step):
        vr = _angle_in(args, v)
        try:
            st = conic.state_at(el, vr, gm=None)
        except DomainError:
            skipped += 1
            continue
        rows.append((v, st.r, st.x, st.y))
    if skipped:
        print(f"warning: skipped {skipped} true anomalies beyond the asymptote", file=sys.stderr)
    return csv_text(["v", "r", "x", "y"], rows)


def cmd_star_fix(args) -> str:
    obs = sphastro.AltitudeObservation(
        tuple(_angle_in(args, h) for h in (args.h1, args.h2, args.h3)),
        tuple(_angle_in(args, g) for g in (args.tau1, args.tau2)),
    )
    fix = sphastro.star_fix(obs, _tolerance(args))
    return csv_text(["latitude", "declination", "hour_angle"],
                    [tuple(_angle_out(args, a) for a in (fix.latitude, fix.declination, fix.first_hour_angle))])


def cmd_lagrange(args) -> str:
    system = cr3bp.Cr3bpSystem(args.mu)
    pts = cr3bp.lagrange_points(system)
    rows = [(name, x, y, pts.stability[name].value) for name, (x, y) in pts.positions().items()]
    return csv_text(["name", "x", "y", "stability"], rows)


def cmd_propagate(args) -> str:
    if args.every < 1:
        raise DomainError(f"--every must be >= 1, got {args.every!r}")
    system = cr3bp.Cr3bpSystem(args.mu)
    s0 = cr3bp.RotState(args.x, args.y, args.z, args.vx, args.vy, args.vz, 0.0)
    traj = cr3bp.propagate(system, s0, args.t_end, args.dt, args.method, args.rtol, args.atol)
    idx = list(range(0, len(traj), args.every))
    if idx[-1] != len(traj) - 1:
        idx.append(len(traj) - 1)
    rows = [(traj.t[i], *traj.states[i], traj.jacobi[i]) for i in idx]
    print(f"jacobi relative drift: {traj.jacobi_drift():.3e}", file=sys.stderr)
    return csv_text(["t", "x", "y", "z", "vx", "vy", "vz", "C"], rows)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="synodic", description="Celestial-mechanics tables: Kepler's equation, "
                     "conic orbits, star fixes and the restricted three-body problem.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, angles=False, tol=False):
        p.add_argument("-o", "--output", help="write CSV here instead of stdout")
        if angles:
            p.add_argument("--radians", action="store_true", help="angles in radians (default degrees)")
        if tol:
            p.add_argument("--abs-eps", type=float, default=1e-12)
            p.add_argument("--max-iter", type=int, default=200)

    p = sub.add_parser("kepler-solve", help="solve Kepler's equation for the eccentric anomaly")
    p.add_argument("--e", type=float, required=True, help="eccentricity, 0 <= e < 1")
    p.add_argument("--M", type=float, required=True, help="mean anomaly")
    p.add_argument("--method", choices=[m.value for m in kepler.SolveMethod], default="euler")
    common(p, angles=True, tol=True)
    p.set_defaults(func=cmd_kepler_solve)

    p = sub.add_parser("orbit-table", help="tabulate radius and position over true anomaly")
    p.add_argument("--e", type=float, required=True)
    p.add_argument("--p", type=float, help="semi-latus rectum")
    p.add_argument("--a", type=float, help="semimajor axis")
    p.add_argument("--q", type=float, help="periapsis distance")
    p.add_argument("--v-start", type=float, default=0.0)
    p.add_argument("--v-stop", type=float, default=360.0)
    p.add_argument("--v-step", type=float, default=30.0)
    common(p, angles=True)
    p.set_defaults(func=cmd_orbit_table)

    p = sub.add_parser("star-fix", help="latitude and declination from three altitudes of one star")
    for name in ("h1", "h2", "h3"):
        p.add_argument(f"--{name}", type=float, required=True, help="altitude")
    p.add_argument("--tau1", type=float, required=True, help="hour-angle gap between sightings 1 and 2")
    p.add_argument("--tau2", type=float, required=True, help="hour-angle gap between sightings 2 and 3")
    common(p, angles=True, tol=True)
    p.set_defaults(func=cmd_star_fix)

    p = sub.add_parser("lagrange", help="libration points and their linear stability")
    p.add_argument("--mu", type=float, required=True, help="mass parameter, 0 < mu <= 0.5")
    common(p)
    p.set_defaults(func=cmd_lagrange)

    p = sub.add_parser("propagate", help="integrate a rotating-frame trajectory")
    p.add_argument("--mu", type=float, required=True)
    for name in ("x", "y", "z", "vx", "vy", "vz"):
        p.add_argument(f"--{name}", type=float, default=0.0)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--dt", type=float, default=1e-3, help="step (rk4) or first trial step (rkf45)")
    p.add_argument("--method", choices=[m.value for m in cr3bp.Integrator], default="rk4")
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-10)
    p.add_argument("--every", type=int, default=1, help="emit every Nth sample (final one always)")
    common(p)
    p.set_defaults(func=cmd_propagate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(str(exc))
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        text = args.func(args)
    except DomainError as exc:
        print(f"synodic {args.command}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SynodicError as exc:
        print(f"synodic {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK
