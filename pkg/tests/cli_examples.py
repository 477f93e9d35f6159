"""Documented CLI invocations and their golden outputs.

Run this file directly to rewrite the golden files after an intended
output change.
"""

import contextlib
import io
import pathlib

from synodic.cli import main

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"

EXAMPLES = {
    "kepler_earth_euler": ["kepler-solve", "--e", "0.01678", "--M", "1.5708", "--method", "euler"],
    "kepler_earth_quarter_radians": ["kepler-solve", "--e", "0.01678", "--M", "1.5707963267948966",
                                     "--radians", "--method", "euler"],
    "kepler_moon_newton": ["kepler-solve", "--e", "0.0549", "--M", "57.29577951308232", "--method", "newton"],
    "orbit_table_moon": ["orbit-table", "--e", "0.0549", "--a", "1", "--v-step", "30"],
    "star_fix": ["star-fix", "--radians", "--h1", "0.8922053776582151", "--h2", "0.6442887778410017",
                 "--h3", "0.33887189565891557", "--tau1", "0.5", "--tau2", "0.5"],
    "lagrange_earth_moon": ["lagrange", "--mu", "0.012"],
    "propagate_l4": ["propagate", "--mu", "0.012", "--x", "0.489", "--y", "0.8660254037844386",
                     "--t-end", "1", "--dt", "0.01", "--every", "10"],
}


def run(argv):
    """Run the CLI in-process; return (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def golden_path(name):
    return GOLDEN_DIR / f"{name}.csv"


if __name__ == "__main__":
    GOLDEN_DIR.mkdir(exist_ok=True)
    for name, argv in EXAMPLES.items():
        code, text, _ = run(argv)
        assert code == 0, (name, code)
        golden_path(name).write_text(text, encoding="utf-8", newline="\n")
        print(f"wrote {golden_path(name)}")
