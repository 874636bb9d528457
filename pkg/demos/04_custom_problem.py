"""
Your own problem, from a file
=============================

Writes a problem file for a linear-plus-integral equation with a manufactured
solution, then solves it through the command-line entry point and through
the library.

    y'' + y - int_0^1 (t + s) y(s)^2 ds = f(t),   y(0) = 0, y'(0) = 1

With y = sin(t) the integral is t*a + b, where a = int sin^2 and
b = int s sin^2.
"""

import os
import tempfile

import numpy as np
from scipy.integrate import quad

from hybridfide import cli

a = quad(lambda s: np.sin(s) ** 2, 0, 1)[0]
b = quad(lambda s: s * np.sin(s) ** 2, 0, 1)[0]

# y'' + y = 0 for sin, so f = -(t*a + b)
text = f"""\
[problem]
k = 2
n = 0
m = 0
l = 1
g = -(t + s)
f = -(t*{a!r} + {b!r})
y0 = 0, 1

[discretization]
r = 4
q = 4

[solver]
tol = 1e-12
max_iter = 50

[output]
grid_points = 11
exact = sin(t)
"""

workdir = tempfile.mkdtemp()
path = os.path.join(workdir, "sine.ini")
with open(path, "w") as fh:
    fh.write(text)

# the same thing `hybridfide solve sine.ini --out sol.csv` would do
out = os.path.join(workdir, "sol.csv")
code = cli.main(["solve", path, "--out", out])
print("exit code", code)
print(open(out).read())

# or stay in Python and keep the report
table, report, pfile = cli.run_solve(path, grid_points=1000)
print(report.message, "after", report.iterations, "iterations")
print(f"max error {table.abs_error.max():.2e}")
