"""Operational matrices of the hybrid basis.

All matrices are dense ``(r*q, r*q)`` float arrays in the block-major flat
ordering of :mod:`hybridfide.basis`.

* ``P``: running integral, ``int_0^t B(s) ds ~ P B(t)``.
* ``L``: Gram matrix ``int_0^1 B B^T dt`` (diagonal).
* ``J = (P^T)^{-1}``: maps coefficients of ``y - y(0)`` to those of ``y'``.
* ``coeff_matrix(C)``: Galerkin matrix of multiplication by ``C^T B(t)``,
  i.e. ``B B^T C ~ C~ B`` in the projected sense.
"""

import warnings

import numpy as np
import scipy.linalg

from .basis import BasisConfig, legendre_table

#: Pivot magnitude below which ``P^T`` is declared singular.
PIVOT_TOL = 1e-13


class SingularOperatorError(np.linalg.LinAlgError):
    pass


def build_E(cfg: BasisConfig) -> np.ndarray:
    """Diagonal block of ``P``: integration within one block."""
    r = cfg.r
    E = np.zeros((r, r))
    E[0, 0] = 1.0
    if r > 1:
        E[0, 1] = 1.0
    for m in range(1, r):
        c = 1.0 / (2 * m + 1)
        E[m, m - 1] = -c
        # p_r falls outside the basis and is dropped from the last row
        if m + 1 < r:
            E[m, m + 1] = c
    return E / (2 * cfg.q)


def build_H(cfg: BasisConfig) -> np.ndarray:
    """Strict-upper block of ``P``: the full-block integral carried forward."""
    H = np.zeros((cfg.r, cfg.r))
    H[0, 0] = 1.0 / cfg.q
    return H


def build_P(cfg: BasisConfig) -> np.ndarray:
    """Operational matrix of integration."""
    upper = np.triu(np.ones((cfg.q, cfg.q)), k=1)
    return np.kron(np.eye(cfg.q), build_E(cfg)) + np.kron(upper, build_H(cfg))


def build_L(cfg: BasisConfig) -> np.ndarray:
    """``L = int_0^1 B(t) B(t)^T dt = diag(D, ..., D)``."""
    return np.diag(cfg.norms())


def lu_factor_quiet(A):
    """``scipy.linalg.lu_factor`` without its singularity warning; callers check pivots."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(A, check_finite=False)


def build_J(cfg: BasisConfig, P=None) -> np.ndarray:
    """``(P^T)^{-1}`` by dense LU of ``P^T`` solved against the identity.

    Raises
    ------
    SingularOperatorError
        If an LU pivot falls below ``PIVOT_TOL`` in magnitude.
    """
    if P is None:
        P = build_P(cfg)
    lu, piv = lu_factor_quiet(P.T)
    pivots = np.abs(np.diag(lu))
    if pivots.min() < PIVOT_TOL:
        raise SingularOperatorError(
            f"P^T is singular for {cfg}: smallest pivot {pivots.min():.3e}")
    return scipy.linalg.lu_solve((lu, piv), np.eye(cfg.dim))


def matrix_powers(A, n):
    """``[I, A, A^2, ..., A^n]`` by repeated multiplication."""
    out = [np.eye(A.shape[0])]
    for _ in range(n):
        out.append(out[-1] @ A)
    return out


def build_triple_tensor(r: int, nodes=None) -> np.ndarray:
    """``S[i, m, j] = int_{-1}^{1} p_i p_m p_j dx`` for degrees below ``r``.

    Gauss-Legendre with enough nodes to integrate degree ``3(r-1)`` exactly.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    needed = (3 * (r - 1) + 1 + 1) // 2 + 2
    x, w = np.polynomial.legendre.leggauss(max(needed, nodes or 0))
    p = legendre_table(r, x)
    return np.einsum("in,mn,jn,n->imj", p, p, p, w)


def coeff_matrix(C, cfg: BasisConfig, S=None) -> np.ndarray:
    """Coefficient matrix ``C~`` of the vector ``C``.

    Block ``k`` holds ``C~[i, j] = sum_m c_km (2j + 1)/2 S[i, m, j]``, the
    coefficient of ``b_kj`` in the projection of ``b_ki * (C^T B)``.
    """
    C = np.asarray(C, dtype=float)
    if C.shape != (cfg.dim,):
        raise ValueError(f"coefficient vector has shape {C.shape}, expected ({cfg.dim},)")
    if S is None:
        S = build_triple_tensor(cfg.r)
    scale = (2 * np.arange(cfg.r) + 1) / 2.0
    blocks = np.einsum("km,imj->kij", C.reshape(cfg.q, cfg.r), S) * scale
    return scipy.linalg.block_diag(*blocks)


def write_matrix_csv(A, path):
    """Row-major CSV, 17 significant digits, no header."""
    np.savetxt(path, np.asarray(A), fmt="%.17g", delimiter=",")


def read_matrix_csv(path) -> np.ndarray:
    return np.atleast_2d(np.loadtxt(path, delimiter=",", dtype=float))
