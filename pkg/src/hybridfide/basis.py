"""Legendre polynomials, block-pulse functions and the hybrid basis on [0, 1).

The hybrid function ``b_km`` is the Legendre polynomial of degree ``m``
mapped onto the ``k``-th of ``q`` equal blocks of [0, 1) and set to zero
outside it.  Stacking ``B_k = (b_k0, ..., b_k(r-1))`` for ``k = 1..q`` gives
the length ``r*q`` vector ``B(t)``; flat positions are zero-based and
block-major, ``flat = (k - 1) * r + m``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


@dataclass(frozen=True)
class BasisConfig:
    """Discretization parameters.

    Parameters
    ----------
    r : int
        Legendre polynomials per block (degrees ``0 .. r-1``).
    q : int
        Number of equal subintervals of [0, 1).
    """

    r: int = 3
    q: int = 4

    def __post_init__(self):
        for name in ("r", "q"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")

    @property
    def dim(self) -> int:
        return self.r * self.q

    def index(self, k: int, m: int) -> "HybridIndex":
        return HybridIndex.from_km(k, m, self)

    def unflat(self, flat: int) -> "HybridIndex":
        return HybridIndex.from_flat(flat, self)

    def block_of(self, t):
        """1-based block index of the point(s) ``t``."""
        t = check_domain(t)
        return np.minimum(np.floor(t * self.q).astype(int), self.q - 1) + 1

    def degrees(self) -> np.ndarray:
        """Legendre degree of every flat position."""
        return np.tile(np.arange(self.r), self.q)

    def norms(self) -> np.ndarray:
        """Self inner products ``<b_km, b_km> = 1 / (q (2m + 1))`` in flat order."""
        return 1.0 / (self.q * (2.0 * self.degrees() + 1.0))


class HybridIndex(NamedTuple):
    k: int
    m: int
    flat: int

    @classmethod
    def from_km(cls, k, m, cfg):
        if not 1 <= k <= cfg.q:
            raise IndexError(f"block index k={k} outside 1..{cfg.q}")
        if not 0 <= m < cfg.r:
            raise IndexError(f"degree m={m} outside 0..{cfg.r - 1}")
        return cls(k, m, (k - 1) * cfg.r + m)

    @classmethod
    def from_flat(cls, flat, cfg):
        if not 0 <= flat < cfg.dim:
            raise IndexError(f"flat index {flat} outside 0..{cfg.dim - 1}")
        k, m = divmod(flat, cfg.r)
        return cls(k + 1, m, flat)


def check_domain(t):
    """Return ``t`` as a float array, rejecting points outside [0, 1)."""
    arr = np.asarray(t, dtype=float)
    bad = ~((arr >= 0.0) & (arr < 1.0))
    if np.any(bad):
        first = arr[bad].flat[0] if arr.ndim else float(arr)
        raise ValueError(f"t={first!r} outside the basis domain [0, 1)")
    return arr


def legendre_eval(m, x):
    """Legendre polynomial ``p_m(x)`` by the three-term recurrence.

    Works elementwise on arrays.  Arguments outside [-1, 1] are allowed.
    """
    if m < 0:
        raise ValueError(f"degree must be non-negative, got {m}")
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if m == 0:
        return p_prev if x.ndim else float(p_prev)
    p = x.copy()
    for j in range(1, m):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return p if x.ndim else float(p)


def legendre_table(r, x):
    """Rows ``p_0(x) .. p_{r-1}(x)``; shape ``(r,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((r,) + x.shape)
    out[0] = 1.0
    if r > 1:
        out[1] = x
    for j in range(1, r - 1):
        out[j + 1] = ((2 * j + 1) * x * out[j] - j * out[j - 1]) / (j + 1)
    return out


def block_pulse(k, t, q):
    """Indicator of ``[(k-1)/q, k/q)``."""
    t = np.asarray(t, dtype=float)
    val = ((k - 1) / q <= t) & (t < k / q)
    return val.astype(float) if t.ndim else float(val)


def hybrid_eval(k, m, t, cfg):
    """Evaluate ``b_km(t)``; zero outside block ``k``."""
    idx = cfg.index(k, m)
    t = check_domain(t)
    x = 2 * cfg.q * t - 2 * idx.k + 1
    inside = cfg.block_of(t) == idx.k
    val = np.where(inside, legendre_eval(idx.m, x), 0.0)
    return val if t.ndim else float(val)


def basis_matrix(t, cfg):
    """Rows ``B(t_i)^T`` for a 1-D array of points; shape ``(len(t), r*q)``."""
    t = np.atleast_1d(check_domain(t)).ravel()
    k = cfg.block_of(t)
    x = 2 * cfg.q * t - 2 * k + 1
    out = np.zeros((t.size, cfg.dim))
    cols = (k - 1)[:, None] * cfg.r + np.arange(cfg.r)[None, :]
    out[np.arange(t.size)[:, None], cols] = legendre_table(cfg.r, x).T
    return out


def basis_vector(t, cfg):
    """The stacked hybrid basis vector ``B(t)`` at a single point."""
    if np.ndim(t) != 0:
        raise ValueError("basis_vector takes a scalar t; use basis_matrix for arrays")
    return basis_matrix(t, cfg)[0]
