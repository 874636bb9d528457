"""
Hybrid basis and its operator matrices
======================================

A tour of the basis functions and the three matrices everything else is
built from: the integration matrix P, the Gram matrix L and the
differentiation matrix J.
"""

import numpy as np

from hybridfide import BasisConfig, basis_matrix, build_J, build_L, build_P, hybrid_eval

np.set_printoptions(precision=5, suppress=True, linewidth=110)

# three Legendre degrees on each of four blocks -> 12 functions
cfg = BasisConfig(r=3, q=4)
print("dimension:", cfg.dim)

# flat index is block-major; (k, m) are the block (1-based) and the degree
for flat in (0, 1, 2, 3, 11):
    print(flat, "->", cfg.unflat(flat))

# each function lives on one block only
t = np.array([0.1, 0.3, 0.6, 0.9])
print("b_21 at", t, "=", hybrid_eval(2, 1, t, cfg))

# the rows of B(t) at a few points
print(basis_matrix(t, cfg))

# L is diagonal, entries 1 / (q (2m+1))
L = build_L(cfg)
print("diag(L):", np.diag(L))

# check L against a brute-force Gram matrix
x = np.linspace(0, 1, 200001)[:-1] + 0.5 / 200000
B = basis_matrix(x, cfg)
print("midpoint-rule Gram error:", np.abs(B.T @ B / x.size - L).max())

# P integrates: int_0^t B(s) ds ~ P B(t)
P = build_P(cfg)
print("P, first block:")
print(P[:3, :6])

# take y = t^2 (exactly representable); its running integral t^3/3 is not,
# but its coefficients come out right
from hybridfide import project_function
Y = project_function(lambda t: t ** 2, cfg)
print("proj(t^3/3) - P^T proj(t^2):",
      np.abs(project_function(lambda t: t ** 3 / 3, cfg) - P.T @ Y).max())

# J undoes P^T; here it is at the smallest nontrivial size
print(build_J(BasisConfig(1, 2)))
J = build_J(cfg)
print("||J P^T - I|| =", np.abs(J @ P.T - np.eye(cfg.dim)).max())

# differentiation amplifies: the entries of J grow linearly with q
print("max |J| for q = 2, 4, 8:",
      [float(np.abs(build_J(BasisConfig(3, q))).max()) for q in (2, 4, 8)])
