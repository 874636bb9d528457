"""
Projecting functions and kernels
================================

Functions become coefficient vectors and two-variable kernels become
coefficient matrices. Here we see how fast the projection error drops as
blocks are refined.
"""

import numpy as np

from hybridfide import BasisConfig, parse, project_function, project_kernel, reconstruct

np.set_printoptions(precision=6, suppress=True, linewidth=110)

cfg = BasisConfig(3, 4)

# expressions are plain strings in t (and s for kernels)
f = parse("exp(t) - (t/4)*(exp(2)+1)")
print(f)
F = project_function(f, cfg)
print("F =", F)

# polynomials of degree < r are reproduced to rounding
F2 = project_function(parse("2 - t/2"), cfg)
print("F for 2 - t/2:", F2)

# sup-norm error of the projection of sin(3t) as q grows
grid = np.linspace(0, 1 - 1e-9, 2001)
for q in (1, 2, 4, 8, 16):
    c = BasisConfig(3, q)
    Y = project_function(lambda t: np.sin(3 * t), c)
    err = np.abs(reconstruct(Y, grid, c) - np.sin(3 * grid)).max()
    print(f"q={q:2d}  max error {err:.2e}")

# a separable kernel gives a rank-one matrix
G = project_kernel(parse("-s*t"), cfg)
print("rank of G:", np.linalg.matrix_rank(G, tol=1e-12))
print("G[0, 0] =", G[0, 0])

# a smooth non-separable one has rapidly decaying singular values
G = project_kernel(parse("exp(-(t-s)^2/0.1)"), cfg)
print("singular values:", np.linalg.svd(G, compute_uv=False)[:6])
