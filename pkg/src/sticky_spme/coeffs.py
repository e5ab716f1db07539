"""Pointwise (Nemytskii) diffusion and sojourn coefficients, the power-law
noise coloring, and their discretized counterparts on the grid."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .grid import Grid

__all__ = [
    "Nemytskii",
    "NoiseColoring",
    "eval_coeff",
    "discretize_mode",
    "mode_matrix",
    "sigma_n",
    "check_support_condition",
    "SupportReport",
]


@dataclass(frozen=True, eq=False)
class Nemytskii:
    """Affine coefficient u -> b0 + b1*u, optionally modulated by a smooth
    profile in x.  Nonnegative on u >= 0 by the sign constraints on b0, b1."""

    b0: float
    b1: float = 0.0
    x_profile: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.b0 < 0.0 or self.b1 < 0.0:
            raise ValueError("coefficient parameters must be nonnegative")

    @property
    def growth_constant(self) -> float:
        return max(self.b0, self.b1)

    def __call__(self, x, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 0.0):
            raise ValueError("coefficient evaluated at negative state")
        out = self.b0 + self.b1 * u
        if self.x_profile is not None:
            out = out * np.asarray(self.x_profile(np.asarray(x, dtype=float)))
        return out


def eval_coeff(c: Nemytskii, x: float, u: float) -> float:
    return float(c(x, u))


@dataclass(frozen=True, eq=False)
class NoiseColoring:
    """Power-law mode weights mu_k = c * k^{-q}, truncated at n_modes.

    q > 1.5 guarantees sum k^2 mu_k^2 < infinity.
    """

    c: float
    q: float
    n_modes: int

    def __post_init__(self):
        if self.c <= 0.0:
            raise ValueError("coloring amplitude must be positive")
        if self.q <= 1.5:
            raise ValueError(f"coloring decay q={self.q} must exceed 1.5")
        if self.n_modes < 1:
            raise ValueError("need at least one noise mode")

    def mu(self, k_max: int | None = None) -> np.ndarray:
        k_max = self.n_modes if k_max is None else k_max
        k = np.arange(1, k_max + 1)
        out = self.c * k**(-self.q)
        out[k > self.n_modes] = 0.0
        return out


def _sine_cell_averages(grid: Grid, k: np.ndarray) -> np.ndarray:
    """(len(k), n) matrix of cell averages of g_k = sqrt(2) sin(k pi x):
    h^{-1} * sqrt(2) * [cos(k pi (i-1) h) - cos(k pi i h)] / (k pi)."""
    h = grid.h
    edges = h * np.arange(grid.n + 1)
    cosk = np.cos(np.pi * np.outer(k, edges))
    return np.sqrt(2.0) * (cosk[:, :-1] - cosk[:, 1:]) / (np.pi * k[:, None] * h)


def discretize_mode(c: Nemytskii, u: np.ndarray, grid: Grid,
                    coloring: NoiseColoring, k: int) -> np.ndarray:
    """Component i of the discretized diffusion coefficient applied to mode
    g_k: the cell average of b(y, u_i) g_k(y).

    For an x-independent b the cell integral of g_k is closed form; with an
    x-profile a per-cell Gauss-Legendre rule is used.
    """
    if not (1 <= k <= coloring.n_modes):
        raise ValueError(f"mode {k} out of range (n_modes={coloring.n_modes})")
    return mode_matrix(c, u, grid, np.array([k]))[0]


def mode_matrix(c: Nemytskii, u: np.ndarray, grid: Grid, k: np.ndarray) -> np.ndarray:
    """(len(k), n) matrix with rows the discretized coefficient per mode."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0):
        raise ValueError("coefficient discretization at negative state")
    k = np.asarray(k, dtype=int)
    if c.x_profile is None:
        g_avg = _sine_cell_averages(grid, k)
        return (c.b0 + c.b1 * u)[None, :] * g_avg
    # x-dependent case: per-cell quadrature of b(y, u_i) g_k(y)
    from .grid import _GL_X, _GL_W

    h = grid.h
    left = h * np.arange(grid.n)
    x = left[:, None] + 0.5 * h * (_GL_X[None, :] + 1.0)
    bx = (c.b0 + c.b1 * u)[:, None] * np.asarray(c.x_profile(x))
    out = np.empty((len(k), grid.n))
    for j, kj in enumerate(k):
        gk = np.sqrt(2.0) * np.sin(np.pi * kj * x)
        out[j] = 0.5 * (bx * gk) @ _GL_W
    return out


def sigma_n(c: Nemytskii, coloring: NoiseColoring, u: np.ndarray, grid: Grid) -> np.ndarray:
    """Componentwise diffusion intensity: sum over retained modes of
    mu_k^2 * (discretized coefficient)^2."""
    n_k = min(grid.n, coloring.n_modes)
    k = np.arange(1, n_k + 1)
    bm = mode_matrix(c, u, grid, k)
    mu = coloring.mu(n_k)
    return np.einsum("k,ki,ki->i", mu**2, bm, bm)


@dataclass(frozen=True)
class SupportReport:
    passed: bool
    bad_fraction: float


def check_support_condition(r: Nemytskii, b: Nemytskii, coloring: NoiseColoring,
                            n_probe: int = 201) -> SupportReport:
    """Check r(x,u) = 1_{v(x,u)>0} r(x,u) on a probe lattice, where
    v(x,u) = b(x,u)^2 * sum mu_k^2 g_k(x)^2."""
    xs = np.linspace(0.0, 1.0, n_probe + 2)[1:-1]
    us = np.linspace(0.0, 4.0, 33)
    mu = coloring.mu()
    k = np.arange(1, coloring.n_modes + 1)
    g_sq = 2.0 * np.sin(np.pi * np.outer(k, xs)) ** 2
    noise_floor = mu**2 @ g_sq
    bad = 0
    for u in us:
        v = np.asarray(b(xs, np.full_like(xs, u))) ** 2 * noise_floor
        rv = np.asarray(r(xs, np.full_like(xs, u)))
        bad += int(np.sum((v <= 0.0) & (rv > 0.0)))
    total = len(us) * len(xs)
    return SupportReport(passed=(bad == 0), bad_fraction=bad / total)
