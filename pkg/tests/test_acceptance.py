"""Exit criteria, one test per criterion, each at its pinned tolerance.

Every test records a ``PASS``/``FAIL`` line; the lines are printed in the
pytest terminal summary and by ``python tests/test_acceptance.py``.
"""

import sys

import numpy as np
import pytest

from conftest import CFG, example_problems
from hybridfide.basis import BasisConfig, basis_matrix
from hybridfide.cli import run_solve
from hybridfide.expr import parse
from hybridfide.operators import (build_J, build_L, build_P, build_triple_tensor,
                                  coeff_matrix)
from hybridfide.projection import project_function
from hybridfide.system import DiscreteSystem, derivative_coeffs, solve

RESULTS = []

# published reference coefficients for the built-in problems at r=3, q=4
REF_F1 = [0.873944, -0.120293, 0.0059084, 0.672309, -0.0799997, 0.00758654,
            0.562325, -0.0282622, 0.00974131, 0.570021, 0.0381702, 0.0125081]
REF_F2 = [1.9375, -0.0625, 0, 1.8125, -0.0625, 8.32667e-16,
            1.6875, -0.0625, -1.33227e-14, 1.5625, -0.0625, -3.55271e-14]
REF_F2_NOISE = [2, 5, 8, 11]
REF_F3 = [0.0625, 0.125, 0.0625, 0.6875, 0.5, 0.0625,
            2.0625, 0.875, 0.0625, 4.1875, 1.25, 0.0625]
REF_Y1 = [1.1361, 0.141865, 0.00591104, 1.45878, 0.182158, 0.00758992,
            1.87311, 0.233896, 0.00974566, 2.40513, 0.300328, 0.0125137]
REF_Y3_BLOCK1 = [0.00781248, 0.0140625, 0.00781249]


def record(label, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_F_example_1():
    F = project_function(parse("exp(t) - (t/4)*(exp(2)+1)"), CFG)
    err = np.abs(F - REF_F1).max()
    record("1 F regression, ex1", err <= 1e-5, f"max |F - ref| = {err:.2e} (tol 1e-5)")


def test_criterion_2_F_examples_2_and_3():
    F2 = project_function(parse("2 - t/2"), CFG)
    F3 = project_function(parse("6*t^2 - t/2"), CFG)
    printed = [i for i in range(12) if i not in REF_F2_NOISE]
    err2 = np.abs(F2[printed] - np.array(REF_F2)[printed]).max()
    noise = np.abs(F2[REF_F2_NOISE]).max()
    err3 = np.abs(F3 - REF_F3).max()
    ok = err2 <= 1e-6 and err3 <= 1e-6 and noise < 1e-10
    record("2 F regression, ex2 and ex3", ok,
           f"ex2 max err {err2:.2e}, ex3 max err {err3:.2e} (tol 1e-6); "
           f"ex2 noise entries {noise:.2e} (< 1e-10)")


def test_criterion_3_Y_example_1():
    report, _ = solve(example_problems()["ex1"], CFG)
    err = np.abs(report.Y - REF_Y1).max()
    record("3 Y regression, ex1", report.converged and err <= 2e-4,
           f"max |Y - ref| = {err:.2e} (tol 2e-4), converged={report.converged}")


def test_criterion_4_exactness_example_2():
    table, report, _ = run_solve("ex2", grid_points=1000)
    err = np.abs(table.y_approx - table.t ** 2).max()
    ok = err < 1e-8 and report.raw_residual < 1e-10 and report.final_residual < 1e-10
    record("4 exactness, ex2", ok,
           f"max |y - t^2| = {err:.2e} (< 1e-8); ||R||inf = {report.raw_residual:.2e}, "
           f"integrated {report.final_residual:.2e} (< 1e-10)")


def test_criterion_5_projection_limit_example_3():
    report, _ = solve(example_problems()["ex3"], CFG)
    oracle = project_function(parse("2*t^3"), CFG)
    dist = np.abs(report.Y - oracle).max()
    block1 = np.abs(report.Y[:3] - REF_Y3_BLOCK1).max()
    ok = report.converged and dist <= 5e-4 and block1 <= 1e-5
    record("5 projection limit, ex3", ok,
           f"||Y - P(2t^3)||inf = {dist:.2e} (tol 5e-4); block-1 vs reference {block1:.2e} (tol 1e-5)")


def test_criterion_6_error_curve_example_1():
    table, report, _ = run_solve("ex1", grid_points=1000)
    err = np.abs(table.y_approx - np.exp(table.t)).max()
    ok = report.converged and 1e-6 < err < 2e-3
    record("6 error magnitude, ex1", ok, f"max |y - e^t| = {err:.2e} (in (1e-6, 2e-3))")


def _running_integral_coeffs(flat, cfg):
    from numpy.polynomial import Legendre
    k, m, _ = cfg.unflat(flat)
    anti = Legendre.basis(m).integ(lbnd=-1)
    full = 1.0 / cfg.q if m == 0 else 0.0

    def F(t):
        x = np.clip(2 * cfg.q * t - 2 * k + 1, -1, 1)
        return np.where(t < (k - 1) / cfg.q, 0.0,
                        np.where(t >= k / cfg.q, full, anti(x) / (2 * cfg.q)))
    return project_function(F, cfg)


def test_criterion_7_operator_properties():
    # (a) J P^T = I
    worst_a = max(np.abs(build_J(c) @ build_P(c).T - np.eye(c.dim)).sum(axis=1).max()
                  for c in (BasisConfig(r, q) for r in range(1, 6) for q in range(1, 7)))
    # (b) L against quadrature of int B B^T
    worst_b = 0.0
    for r, q in [(1, 1), (3, 4), (5, 6), (4, 3)]:
        cfg = BasisConfig(r, q)
        x, w = np.polynomial.legendre.leggauss(r + 1)
        gram = sum(B.T @ (B * (w / (2 * q))[:, None])
                   for B in (basis_matrix((k + (x + 1) / 2) / q, cfg) for k in range(q)))
        worst_b = max(worst_b, np.abs(build_L(cfg) - gram).max())
    # (c) projection-level integration identity, column by column
    worst_c = 0.0
    for r in range(1, 6):
        for q in range(1, 6):
            cfg = BasisConfig(r, q)
            P = build_P(cfg)
            for i in range(cfg.dim):
                worst_c = max(worst_c, np.abs(_running_integral_coeffs(i, cfg) - P.T[:, i]).max())
    # (d) C~ symmetry and linearity
    rng = np.random.default_rng(0)
    L, S = build_L(CFG), build_triple_tensor(CFG.r)
    worst_sym = worst_lin = 0.0
    for _ in range(100):
        u, w = rng.normal(size=(2, CFG.dim))
        a, b = rng.normal(size=2)
        worst_sym = max(worst_sym, np.abs(coeff_matrix(u, CFG, S) @ L @ w
                                          - coeff_matrix(w, CFG, S) @ L @ u).max())
        worst_lin = max(worst_lin, np.abs(coeff_matrix(a * u + b * w, CFG, S)
                                          - a * coeff_matrix(u, CFG, S)
                                          - b * coeff_matrix(w, CFG, S)).max())
    # (e) analytic Jacobian vs central differences (h = 1e-6), 1e-5 relative
    worst_e = 0.0
    for problem in example_problems().values():
        system = DiscreteSystem(problem, CFG)
        for _ in range(10):
            Y = rng.normal(size=CFG.dim)
            A = system.jacobian(Y)
            fd = np.column_stack([(system.residual(Y + 1e-6 * e) - system.residual(Y - 1e-6 * e))
                                  / 2e-6 for e in np.eye(CFG.dim)])
            # entries at the central-difference rounding floor carry no relative information
            floor = 1e-9 * np.abs(A).max()
            rel = np.abs(fd - A) / np.maximum(np.abs(A), floor / 1e-5)
            worst_e = max(worst_e, rel.max())
    checks = {
        "a": worst_a < 1e-10, "b": worst_b < 1e-12, "c": worst_c < 1e-10,
        "d": worst_sym < 1e-12 and worst_lin < 1e-12, "e": worst_e <= 1e-5,
    }
    record("7 operator properties", all(checks.values()),
           f"(a) {worst_a:.1e} (b) {worst_b:.1e} (c) {worst_c:.1e} "
           f"(d) sym {worst_sym:.1e} lin {worst_lin:.1e} (e) rel {worst_e:.1e}; "
           f"failed={[k for k, v in checks.items() if not v]}")


def test_criterion_8_derivative_recursion():
    rng = np.random.default_rng(8)
    worst = 0.0
    for cfg in (BasisConfig(3, 4), BasisConfig(4, 3)):
        J = build_J(cfg)
        for _ in range(20):
            Y = rng.normal(size=cfg.dim)
            Y0 = list(rng.normal(size=(4, cfg.dim)))
            for n in range(1, 5):
                lhs = derivative_coeffs(Y, n, Y0, J)
                closed = (np.linalg.matrix_power(J, n) @ Y
                          - sum(np.linalg.matrix_power(J, l) @ Y0[n - l] for l in range(1, n + 1)))
                rec = J @ (derivative_coeffs(Y, n - 1, Y0, J) - Y0[n - 1])
                scale = max(1.0, np.abs(lhs).max())
                worst = max(worst, np.abs(lhs - rec).max() / scale,
                            np.abs(lhs - closed).max() / scale)
    record("8 derivative recursion identity", worst <= 1e-12,
           f"max relative deviation {worst:.1e} (tol 1e-12)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
