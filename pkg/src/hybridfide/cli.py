"""Problem files, built-in examples and the ``hybridfide`` command line.

Commands::

    hybridfide solve <file|ex1|ex2|ex3> [--out CSV] [--grid N]
    hybridfide matrices --which P|L|J --r R --q Q [--out CSV]
    hybridfide project --expr TEXT --r R --q Q [--out PATH]

``HF_QUAD_NODES`` overrides the number of Gauss-Legendre nodes per block.
The exit status of ``solve`` is 0 exactly when Newton converged.
"""

import argparse
import configparser
import os
import sys
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from . import expr
from .basis import BasisConfig
from .operators import build_J, build_L, build_P, write_matrix_csv
from .projection import DEFAULT_NODES, project_function, reconstruct
from .system import INITIAL_GUESSES, DiscreteSystem, ProblemSpec, SolveOptions, newton_solve

BUILTINS = ("ex1", "ex2", "ex3")
MAX_DIM = 4096
GRID_END = 1.0 - 1e-9


class ProblemFileError(ValueError):
    pass


@dataclass
class ProblemFile:
    """Parsed contents of an INI problem file."""

    problem: ProblemSpec
    cfg: BasisConfig
    options: SolveOptions
    grid_points: int = 1000
    exact: Optional[expr.Expr] = None
    name: str = ""


@dataclass
class SolutionTable:
    t: np.ndarray
    y_approx: np.ndarray
    y_exact: Optional[np.ndarray] = None

    @property
    def abs_error(self):
        if self.y_exact is None:
            return None
        return np.abs(self.y_approx - self.y_exact)

    def write_csv(self, stream):
        cols = [self.t, self.y_approx]
        header = "t,y_approx"
        if self.y_exact is not None:
            cols += [self.y_exact, self.abs_error]
            header += ",y_exact,abs_error"
        np.savetxt(stream, np.column_stack(cols), fmt="%.17g", delimiter=",",
                   header=header, comments="")


def quad_nodes():
    raw = os.environ.get("HF_QUAD_NODES")
    if not raw:
        return DEFAULT_NODES
    try:
        nodes = int(raw)
    except ValueError:
        raise ProblemFileError(f"HF_QUAD_NODES must be an integer, got {raw!r}") from None
    if nodes < 1:
        raise ProblemFileError(f"HF_QUAD_NODES must be positive, got {nodes}")
    return nodes


def builtin_source(name):
    """Text of a shipped problem file."""
    if name not in BUILTINS:
        raise KeyError(f"unknown built-in problem {name!r}; choose from {BUILTINS}")
    return (resources.files("hybridfide") / "problems" / f"{name}.ini").read_text()


def _floats(text, what):
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ProblemFileError(f"{what}: expected numbers, got {text!r}") from None


def _expr(text, what, variables):
    try:
        return expr.parse(text, variables)
    except expr.ExprError as err:
        raise ProblemFileError(f"{what}: {err}") from err


def parse_problem(text, name=""):
    """Build a :class:`ProblemFile` from INI text, validating eagerly."""
    ini = configparser.ConfigParser(inline_comment_prefixes=None)
    try:
        ini.read_string(text, source=name or "<problem>")
        sec = ini["problem"]
        k, n, m = (sec.getint(key) for key in ("k", "n", "m"))
        for key, val in zip("knm", (k, n, m)):
            if val is None:
                raise ProblemFileError(f"[problem] is missing {key}")
        l = _expr(sec.get("l", "0"), "[problem] l", ("t",))
        g = _expr(sec.get("g", "0"), "[problem] g", ("t", "s"))
        if "f" not in sec:
            raise ProblemFileError("[problem] is missing f")
        f = _expr(sec["f"], "[problem] f", ("t",))
        y0 = _floats(sec.get("y0", ""), "[problem] y0")
        problem = ProblemSpec(k, n, m, l, g, f, y0)

        disc = ini["discretization"] if ini.has_section("discretization") else {}
        cfg = BasisConfig(int(disc.get("r", 3)), int(disc.get("q", 4)))
        if cfg.dim > MAX_DIM:
            raise ProblemFileError(f"r*q = {cfg.dim} exceeds the limit {MAX_DIM}")

        solver = ini["solver"] if ini.has_section("solver") else {}
        guess = solver.get("initial_guess", "linear").strip()
        if guess not in INITIAL_GUESSES:
            guess = np.array(_floats(guess, "[solver] initial_guess"))
        options = SolveOptions(tol=float(solver.get("tol", 1e-12)),
                               max_iter=int(solver.get("max_iter", 100)),
                               initial_guess=guess)

        out = ini["output"] if ini.has_section("output") else {}
        grid = int(out.get("grid_points", 1000))
        exact = out.get("exact")
        exact = _expr(exact, "[output] exact", ("t",)) if exact else None
    except ProblemFileError:
        raise
    except (configparser.Error, KeyError, ValueError) as err:
        raise ProblemFileError(f"{name or 'problem file'}: {err}") from err
    if grid < 2:
        raise ProblemFileError(f"grid_points must be >= 2, got {grid}")
    return ProblemFile(problem, cfg, options, grid, exact, name)


def load_problem(source):
    """Load a built-in name or a path to an INI file."""
    if source in BUILTINS:
        return parse_problem(builtin_source(source), source)
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise ProblemFileError(f"cannot read problem file: {err}") from err
    return parse_problem(text, os.path.basename(source))


def sample_grid(points):
    return np.linspace(0.0, GRID_END, points)


def run_solve(source, grid_points=None, nodes=None):
    """Solve a problem file or built-in; returns ``(table, report, pfile)``."""
    pfile = source if isinstance(source, ProblemFile) else load_problem(source)
    system = DiscreteSystem(pfile.problem, pfile.cfg, nodes or quad_nodes())
    report = newton_solve(system, pfile.options)
    t = sample_grid(grid_points or pfile.grid_points)
    y = reconstruct(report.Y, t, pfile.cfg)
    exact = None if pfile.exact is None else np.broadcast_to(pfile.exact(t), t.shape).copy()
    return SolutionTable(t, y, exact), report, pfile


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _cmd_solve(args):
    table, report, pfile = run_solve(args.problem, args.grid)
    out = _open_out(args.out)
    try:
        table.write_csv(out)
    finally:
        if out is not sys.stdout:
            out.close()
    line = (f"{pfile.name}: {report.message}; iterations={report.iterations} "
            f"residual={report.final_residual:.3e} raw_residual={report.raw_residual:.3e}")
    if table.abs_error is not None:
        line += f" max_abs_error={table.abs_error.max():.3e}"
    print(line, file=sys.stderr)
    return 0 if report.converged else 1


def _cmd_matrices(args):
    cfg = BasisConfig(args.r, args.q)
    P = build_P(cfg)
    if args.which == "P":
        A = P
    elif args.which == "L":
        A = build_L(cfg)
    else:
        A = build_J(cfg, P)
        err = np.abs(A @ P.T - np.eye(cfg.dim)).sum(axis=1).max()
        if err > 1e-10:
            raise np.linalg.LinAlgError(f"J P^T deviates from the identity by {err:.3e}")
    write_matrix_csv(A, args.out if args.out not in (None, "-") else sys.stdout)
    return 0


def _cmd_project(args):
    cfg = BasisConfig(args.r, args.q)
    f = expr.parse(args.expr, ("t",))
    coeffs = project_function(f, cfg, quad_nodes())
    np.savetxt(args.out if args.out not in (None, "-") else sys.stdout, coeffs, fmt="%.17g")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hybridfide",
        description="Hybrid Legendre/block-pulse solver for nonlinear Fredholm "
                    "integro-differential equations on [0, 1).",
        epilog="Expressions use + - * / ^ with ^ right-associative and binding "
               "tighter than unary minus (-t^2 is -(t^2)); variables t, s; "
               "constants e, pi; functions exp sin cos tan log sqrt abs. "
               "HF_QUAD_NODES sets the quadrature nodes per block (default 24).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a problem file or built-in example")
    p.add_argument("problem", help="path to an INI problem file, or one of ex1, ex2, ex3")
    p.add_argument("--out", help="solution CSV path (default: stdout)")
    p.add_argument("--grid", type=int, help="number of sample points")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("matrices", help="dump an operational matrix as CSV")
    p.add_argument("--which", choices=("P", "L", "J"), required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--q", type=int, default=4)
    p.add_argument("--out", help="CSV path (default: stdout)")
    p.set_defaults(func=_cmd_matrices)

    p = sub.add_parser("project", help="hybrid coefficients of a function of t")
    p.add_argument("--expr", required=True)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--q", type=int, default=4)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_project)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "solve" and args.grid is not None and args.grid < 2:
        parser.error("--grid must be at least 2")
    try:
        return args.func(args)
    except (ProblemFileError, expr.ExprError, ArithmeticError, ValueError, OSError) as err:
        print(f"hybridfide: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
