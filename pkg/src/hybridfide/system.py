"""Discretized Fredholm integro-differential equation and its Newton solver.

The equation is::

    y^(k)(t) + l(t) y(t) + int_0^1 g(t, s) y^(n)(s) y^(m)(s) ds = f(t),
    y^(i)(0) = y0[i],  i = 0 .. k-1,   n <= m < k.

With ``y ~ Y^T B(t)`` it becomes the ``r*q`` quadratic equations::

    R(Y) = Y_k + V~^T Y + G C~[Y_n] L Y_m - F = 0,

where ``Y_j`` are the derivative coefficients from :func:`derivative_coeffs`.

The entries of ``J`` grow linearly in both ``r`` and ``q`` and ``|J^k|`` is
roughly their k-th power (about 3e6 for ``k = 3`` at ``r = 3, q = 4``), so
``R`` cannot be driven much below ``1e-16 * |J^k|`` in floating point.  Newton therefore monitors the
integrated residual ``(P^T)^k R(Y)``, assembled without forming ``J^k Y``;
it has the same zeros and the same Newton steps.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from .basis import BasisConfig
from .operators import (PIVOT_TOL, build_J, build_L, build_P, build_triple_tensor,
                        coeff_matrix, lu_factor_quiet, matrix_powers)
from .projection import (DEFAULT_NODES, constant_coeffs, project_function,
                         project_initial_conditions, project_kernel)


@dataclass(frozen=True)
class ProblemSpec:
    """Equation data.  ``l``, ``f`` take ``t``; ``g`` takes ``(t, s)``.

    Any vectorized callable works, including parsed
    :class:`hybridfide.expr.Expr` trees.
    """

    k: int
    n: int
    m: int
    l: Optional[Callable]
    g: Optional[Callable]
    f: Callable
    y0: Sequence[float]

    def __post_init__(self):
        if not (0 <= self.n <= self.m < self.k):
            raise ValueError(
                f"derivative orders must satisfy 0 <= n <= m < k, got "
                f"k={self.k}, n={self.n}, m={self.m}")
        object.__setattr__(self, "y0", tuple(float(v) for v in self.y0))
        if len(self.y0) != self.k:
            raise ValueError(f"need {self.k} initial values, got {len(self.y0)}")


#: Named starting points: the zero vector, the expansion of the constant
#: ``y(0)``, or the solution of the equation with the integral term dropped.
INITIAL_GUESSES = ("zero", "ic-constant", "linear")


@dataclass(frozen=True)
class SolveOptions:
    tol: float = 1e-12
    max_iter: int = 100
    initial_guess: object = "linear"
    max_halvings: int = 10

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")
        guess = self.initial_guess
        if isinstance(guess, str) and guess not in INITIAL_GUESSES:
            raise ValueError(f"unknown initial guess {guess!r}")


@dataclass
class SolveReport:
    """Outcome of :func:`newton_solve`.

    ``final_residual`` and ``residual_history`` hold max-norms of the
    integrated residual, the quantity compared against ``tol``;
    ``raw_residual`` is the max-norm of ``R(Y)`` itself.
    """

    Y: np.ndarray
    iterations: int
    final_residual: float
    converged: bool
    raw_residual: float = np.nan
    residual_history: list = field(default_factory=list)
    message: str = ""


def derivative_coeffs(Y, order, Y0, J):
    """``J^n Y - sum_{l=1..n} J^l Y0[n-l]``: coefficients of ``y^(n)``."""
    if order < 0:
        raise ValueError(f"derivative order must be >= 0, got {order}")
    if len(Y0) < order:
        raise ValueError(
            f"order {order} needs {order} initial-condition vectors, got {len(Y0)}")
    out = np.array(Y, dtype=float)
    # Horner form of the closed sum: Y_j = J (Y_{j-1} - Y0[j-1])
    for j in range(order):
        out = J @ (out - Y0[j])
    return out


class DiscreteSystem:
    """Precomputed operators and data vectors for one problem and basis."""

    def __init__(self, problem: ProblemSpec, cfg: BasisConfig, nodes=DEFAULT_NODES):
        self.problem = problem
        self.cfg = cfg
        self.nodes = nodes
        self.P = build_P(cfg)
        self.L = build_L(cfg)
        self.J = build_J(cfg, self.P)
        self.S = build_triple_tensor(cfg.r)
        self.F = project_function(problem.f, cfg, nodes)
        self.G = (np.zeros((cfg.dim, cfg.dim)) if problem.g is None
                  else project_kernel(problem.g, cfg, nodes))
        if problem.l is None:
            self.V = np.zeros(cfg.dim)
        else:
            self.V = project_function(problem.l, cfg, nodes)
        self.Vt = coeff_matrix(self.V, cfg, self.S)
        self.Y0 = project_initial_conditions(problem.y0, cfg)
        self.Jpow = matrix_powers(self.J, problem.k)
        # derivative_coeffs is affine: Y_j = J^j Y - shift[j]
        zero = np.zeros(cfg.dim)
        self.shift = [-derivative_coeffs(zero, j, self.Y0, self.J)
                      for j in range(problem.k + 1)]
        self.linear = self.Jpow[problem.k] + self.Vt.T
        self.PTk = np.linalg.matrix_power(self.P.T, problem.k)
        # y = y(0) + t y'(0) + ... at projection level
        self.taylor = sum(np.linalg.matrix_power(self.P.T, j) @ self.Y0[j]
                          for j in range(problem.k))

    def derivative(self, Y, order):
        return self.Jpow[order] @ Y - self.shift[order]

    def ctilde(self, C):
        return coeff_matrix(C, self.cfg, self.S)

    def nonlinear_term(self, Y):
        p = self.problem
        return self.G @ (self.ctilde(self.derivative(Y, p.n)) @ (self.L @ self.derivative(Y, p.m)))

    def residual(self, Y):
        p = self.problem
        Y = np.asarray(Y, dtype=float)
        return self.derivative(Y, p.k) + self.Vt.T @ Y + self.nonlinear_term(Y) - self.F

    def integrated_residual(self, Y):
        """``(P^T)^k R(Y)``, computed without the ill-scaled ``J^k Y``."""
        Y = np.asarray(Y, dtype=float)
        rest = self.Vt.T @ Y + self.nonlinear_term(Y) - self.F
        return Y - self.taylor + self.PTk @ rest

    def integrated_jacobian(self, Y):
        p = self.problem
        Yn = self.derivative(Y, p.n)
        Ym = self.derivative(Y, p.m)
        rest = (self.Vt.T
                + self.G @ self.ctilde(Yn) @ self.L @ self.Jpow[p.m]
                + self.G @ self.ctilde(Ym) @ self.L @ self.Jpow[p.n])
        return np.eye(self.cfg.dim) + self.PTk @ rest

    def jacobian(self, Y):
        """``J^k + V~^T + G C~[Y_n] L J^m + G C~[Y_m] L J^n``."""
        p = self.problem
        Yn = self.derivative(Y, p.n)
        Ym = self.derivative(Y, p.m)
        return (self.linear
                + self.G @ self.ctilde(Yn) @ self.L @ self.Jpow[p.m]
                + self.G @ self.ctilde(Ym) @ self.L @ self.Jpow[p.n])

    def linear_solution(self):
        """Zero of the residual with the integral term removed."""
        A = np.eye(self.cfg.dim) + self.PTk @ self.Vt.T
        return np.linalg.solve(A, self.taylor + self.PTk @ self.F)

    def initial_guess(self, guess):
        if isinstance(guess, str):
            if guess == "zero":
                return np.zeros(self.cfg.dim)
            if guess == "ic-constant":
                return constant_coeffs(self.problem.y0[0], self.cfg)
            return self.linear_solution()
        guess = np.array(guess, dtype=float)
        if guess.shape != (self.cfg.dim,):
            raise ValueError(f"initial guess has shape {guess.shape}, expected ({self.cfg.dim},)")
        return guess


def assemble_residual(problem: ProblemSpec, cfg: BasisConfig, nodes=DEFAULT_NODES):
    """The map ``Y -> R(Y)``; ``R.__self__`` is the underlying :class:`DiscreteSystem`."""
    return DiscreteSystem(problem, cfg, nodes).residual


def newton_solve(system: DiscreteSystem, options: SolveOptions = SolveOptions()) -> SolveReport:
    """Damped Newton iteration on the integrated residual of ``system``.

    A full step is tried first and halved (at most ``max_halvings`` times)
    until the residual max-norm decreases; if it never does, the smallest
    step is taken anyway.  Stops once the max-norm is at most ``tol``.
    """
    Y = system.initial_guess(options.initial_guess)
    R = system.integrated_residual(Y)
    norm = np.max(np.abs(R))
    history = [float(norm)]
    it = 0
    message = ""
    while norm > options.tol and it < options.max_iter:
        it += 1
        A = system.integrated_jacobian(Y)
        lu, piv = lu_factor_quiet(A)
        if np.abs(np.diag(lu)).min() < PIVOT_TOL * max(1.0, np.abs(A).max()):
            message = f"singular Jacobian at iteration {it}"
            break
        step = scipy.linalg.lu_solve((lu, piv), R)
        lam = 1.0
        for _ in range(options.max_halvings + 1):
            Y_new = Y - lam * step
            R_new = system.integrated_residual(Y_new)
            norm_new = np.max(np.abs(R_new))
            if norm_new < norm:
                break
            lam /= 2
        Y, R, norm = Y_new, R_new, norm_new
        history.append(float(norm))
        if not np.isfinite(norm):
            message = f"non-finite residual at iteration {it}"
            break
    converged = bool(norm <= options.tol)
    if not message:
        message = "converged" if converged else f"no convergence after {it} iterations"
    raw = float(np.max(np.abs(system.residual(Y))))
    return SolveReport(Y, it, float(norm), converged, raw, history, message)


def solve(problem: ProblemSpec, cfg: BasisConfig = BasisConfig(),
          options: SolveOptions = SolveOptions(), nodes=DEFAULT_NODES):
    """Discretize and solve; returns ``(report, system)``."""
    system = DiscreteSystem(problem, cfg, nodes)
    return newton_solve(system, options), system
