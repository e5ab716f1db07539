"""Uniform interior mesh on (0,1) and the maps between functions and grid vectors.

A grid vector ``v`` of length ``n`` carries the values at the interior nodes
``i*h`` for ``i = 1..n`` with ``h = 1/(n+1)``.  The same vector is read in two
ways: as a piecewise constant function (value ``v[i]`` on the cell
``((i-1)h, ih]``) and as a piecewise linear function (nodal interpolation with
zero boundary values).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_banded

__all__ = [
    "Grid",
    "make_grid",
    "project_pc",
    "project_pl",
    "eval_pl",
    "restrict_to",
    "pl_sine_coefficients",
]

# 16-point Gauss-Legendre rule on [-1, 1], used per cell
_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True, eq=False)
class Grid:
    """Interior mesh with n nodes at i*h, h = 1/(n+1)."""

    n: int
    h: float
    nodes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"grid needs at least one interior node, got n={self.n}")


def make_grid(n: int) -> Grid:
    if n < 1:
        raise ValueError(f"grid needs at least one interior node, got n={n}")
    h = 1.0 / (n + 1)
    nodes = h * np.arange(1, n + 1)
    return Grid(n=n, h=h, nodes=nodes)


def _cell_quadrature(f, grid: Grid) -> np.ndarray:
    """Integral of f over each cell ((i-1)h, ih], composite Gauss-Legendre."""
    h = grid.h
    left = h * np.arange(grid.n)
    # map the reference rule into every cell at once
    x = left[:, None] + 0.5 * h * (_GL_X[None, :] + 1.0)
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    return 0.5 * h * fx @ _GL_W


def project_pc(f, grid: Grid) -> np.ndarray:
    """Cell averages of f: the piecewise constant projection.

    ``f`` is either a callable on [0,1] (vectorized) or a pair ``(xs, ys)``
    of samples, in which case trapezoid integration on the samples is used.
    """
    if callable(f):
        vals = _cell_quadrature(f, grid) / grid.h
    else:
        xs, ys = (np.asarray(a, dtype=float) for a in f)
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("non-finite samples")
        edges = grid.h * np.arange(grid.n + 1)
        vals = np.empty(grid.n)
        for i in range(grid.n):
            lo, hi = edges[i], edges[i + 1]
            xx = np.concatenate(([lo], xs[(xs > lo) & (xs < hi)], [hi]))
            yy = np.interp(xx, xs, ys)
            vals[i] = np.trapezoid(yy, xx) / grid.h
    if not np.all(np.isfinite(vals)):
        raise ValueError("non-finite projection values")
    return vals


def _hat_inner_products(f, grid: Grid) -> np.ndarray:
    """<f, hat_i> for the normalized hat functions of height h^{-1/2}."""
    h = grid.h
    n = grid.n
    # split each hat into its two linear pieces and integrate per cell
    left = h * np.arange(n + 1)
    x = left[:, None] + 0.5 * h * (_GL_X[None, :] + 1.0)
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    # rising piece of hat_i lives on cell i-1 (0-based cell i-1 covers ((i-1)h, ih])
    s = (x - left[:, None]) / h          # local coordinate in [0,1] per cell
    w = 0.5 * h * _GL_W
    rise = (fx * s) @ w                   # integral f * (x-left)/h per cell
    fall = (fx * (1.0 - s)) @ w           # integral f * (1-(x-left)/h) per cell
    # hat_i = h^{-1/2} * [rising on cell i, falling on cell i+1] (cells 0-based)
    return (rise[:n] + fall[1 : n + 1]) / np.sqrt(h)


def project_pl(f, grid: Grid) -> np.ndarray:
    """Nodal values of the L2-orthogonal projection onto the hat-function space.

    The hat basis is not orthonormal, so the coefficient vector solves the
    tridiagonal Gram system with entries 2/3 on the diagonal and 1/6 off it.
    """
    if callable(f):
        a = _hat_inner_products(f, grid)
    else:
        xs, ys = (np.asarray(arr, dtype=float) for arr in f)
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("non-finite samples")
        a = _hat_inner_products(lambda x: np.interp(x, xs, ys), grid)
    n = grid.n
    ab = np.zeros((3, n))
    ab[0, 1:] = 1.0 / 6.0
    ab[1, :] = 2.0 / 3.0
    ab[2, :-1] = 1.0 / 6.0
    c = solve_banded((1, 1), ab, a)
    return c / np.sqrt(grid.h)


def eval_pl(v: np.ndarray, grid: Grid, x) -> np.ndarray | float:
    """Evaluate the piecewise linear representation at x in [0,1]."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("evaluation point outside [0,1]")
    padded = np.concatenate(([0.0], np.asarray(v, dtype=float), [0.0]))
    xs = grid.h * np.arange(grid.n + 2)
    out = np.interp(x, xs, padded)
    return float(out) if out.ndim == 0 else out


def restrict_to(v_fine: np.ndarray, grid_fine: Grid, grid_coarse: Grid) -> np.ndarray:
    """Sample the fine piecewise linear interpolant at the coarse nodes."""
    return eval_pl(v_fine, grid_fine, grid_coarse.nodes)


def pl_sine_coefficients(v: np.ndarray, grid: Grid, k_max: int) -> np.ndarray:
    """L2 inner products <u, g_k>, k = 1..k_max, of the piecewise linear
    representation of v against the sine modes g_k = sqrt(2) sin(k pi x).

    Uses the exact antiderivative of a hat function against a sine mode.
    """
    h = grid.h
    n = grid.n
    k = np.arange(1, k_max + 1)
    padded = np.concatenate(([0.0], np.asarray(v, dtype=float), [0.0]))
    i = np.arange(1, n + 1)
    # <hat_i(height 1), g_k> = sqrt(2) (2 sin(k pi i h) - sin(k pi (i-1) h)
    #                                   - sin(k pi (i+1) h)) / (k pi)^2 / h
    s = np.sin(np.pi * h * np.outer(k, np.arange(n + 2)))
    sec_diff = 2.0 * s[:, 1 : n + 1] - s[:, : n] - s[:, 2 : n + 2]
    coeff = np.sqrt(2.0) / (h * (np.pi * k) ** 2)
    return coeff * (sec_diff @ padded[i])
