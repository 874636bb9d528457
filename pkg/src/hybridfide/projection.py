"""Hybrid-basis coefficients of functions and kernels by Gauss-Legendre quadrature."""

import numpy as np

from .basis import BasisConfig, basis_matrix, check_domain

#: Gauss-Legendre nodes per block.
DEFAULT_NODES = 24


class ProjectionError(ArithmeticError):
    pass


def block_quadrature(cfg: BasisConfig, nodes=DEFAULT_NODES):
    """Composite Gauss-Legendre rule on [0, 1): ``nodes`` points per block.

    Returns ``(t, w)`` in increasing ``t``; the block of every node is
    ``index // nodes``.
    """
    if nodes < 1:
        raise ValueError(f"need at least one quadrature node, got {nodes}")
    x, w = np.polynomial.legendre.leggauss(nodes)
    left = np.arange(cfg.q)[:, None] / cfg.q
    t = left + (x[None, :] + 1.0) / (2 * cfg.q)
    return t.ravel(), np.tile(w / (2 * cfg.q), cfg.q)


def _values(func, *args):
    out = np.asarray(func(*args), dtype=float)
    shape = np.broadcast_shapes(*(np.shape(a) for a in args))
    out = np.broadcast_to(out, shape)
    bad = ~np.isfinite(out)
    if bad.any():
        pos = np.unravel_index(np.flatnonzero(bad)[0], shape)
        where = ", ".join(
            f"{name}={float(np.broadcast_to(a, shape)[pos])!r}"
            for name, a in zip("ts", args))
        raise ProjectionError(f"non-finite integrand value at {where}")
    return out


def project_function(f, cfg: BasisConfig, nodes=DEFAULT_NODES) -> np.ndarray:
    """Coefficients ``f_km = <f, b_km> / <b_km, b_km>``.

    ``f`` is called once with the array of all quadrature nodes and may
    return a scalar for constant functions.
    """
    t, w = block_quadrature(cfg, nodes)
    Phi = basis_matrix(t, cfg)
    return (Phi.T @ (w * _values(f, t))) / cfg.norms()


def project_kernel(g, cfg: BasisConfig, nodes=DEFAULT_NODES) -> np.ndarray:
    """Matrix ``G`` with ``g(t, s) ~ B(t)^T G B(s)``.

    ``g`` is called once as ``g(t[:, None], s[None, :])``.
    """
    t, w = block_quadrature(cfg, nodes)
    Phi = basis_matrix(t, cfg) * w[:, None]
    values = _values(g, t[:, None], t[None, :])
    norms = cfg.norms()
    return (Phi.T @ values @ Phi) / np.outer(norms, norms)


def constant_coeffs(value, cfg: BasisConfig) -> np.ndarray:
    """Coefficients of a constant: ``value`` at every ``(k, 0)``."""
    out = np.zeros(cfg.dim)
    out[::cfg.r] = value
    return out


def project_initial_conditions(values, cfg: BasisConfig):
    """``[Y_0^(0), ..., Y_0^(k-1)]``, each the expansion of the constant ``y^(i)(0)``."""
    return [constant_coeffs(float(v), cfg) for v in values]


def reconstruct(Y, t, cfg: BasisConfig):
    """Evaluate ``Y^T B(t)``; scalar in, scalar out."""
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (cfg.dim,):
        raise ValueError(f"coefficient vector has shape {Y.shape}, expected ({cfg.dim},)")
    check_domain(t)
    out = basis_matrix(t, cfg) @ Y
    return float(out[0]) if np.ndim(t) == 0 else out.reshape(np.shape(t))
