"""Scalar functionals of states and trajectories: energies, stickiness,
anisotropic space-time Hoelder norms, time-Slobodeckii norms, martingale
residual diagnostics, and occupation-near-zero estimates."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .spectral import SpectralBasis, discrete_norm
from .sde import Trajectory

__all__ = [
    "HolderSpec",
    "TimeSobolevSpec",
    "energy",
    "g_energy",
    "stickiness",
    "holder_norm",
    "time_sobolev_norm",
    "beta_exponents",
    "MartingaleDiagnostics",
    "martingale_residual",
    "occupation_near_zero",
]


@dataclass(frozen=True)
class HolderSpec:
    gamma1: float = 0.0   # time exponent
    gamma2: float = 0.0   # space exponent

    def __post_init__(self):
        if not (0.0 <= self.gamma1 < 1.0 and 0.0 <= self.gamma2 < 1.0):
            raise ValueError("Hoelder exponents must lie in [0, 1)")


@dataclass(frozen=True)
class TimeSobolevSpec:
    s: float
    p: float
    theta: float

    def __post_init__(self):
        if not 0.0 < self.s < 1.0:
            raise ValueError("s must lie in (0, 1)")
        if self.p < 1.0:
            raise ValueError("p must be at least 1")
        if abs(self.theta) > 1.0:
            raise ValueError("theta outside [-1, 1]")
        if self.s * self.p >= 1.0 + self.p:
            raise ValueError("s*p must be below 1 + p")


def energy(u: np.ndarray, h: float, alpha: float) -> float:
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0):
        raise ValueError("energy of a negative state")
    return float(h * np.sum(u ** (alpha + 1.0)))


def g_energy(u: np.ndarray, basis: SpectralBasis, alpha: float) -> float:
    """Squared fractional norm of u^alpha at order (alpha-2)/alpha."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0):
        raise ValueError("energy of a negative state")
    theta = (alpha - 2.0) / alpha
    return float(discrete_norm(u**alpha, basis, theta) ** 2)


def stickiness(traj: Trajectory) -> float:
    """Space-time measure of the exact-zero set, left-endpoint rule over the
    snapshot grid."""
    dt_out = traj.config.T / traj.config.n_out
    zeros = traj.U[:-1] == 0.0
    return float(np.sum(zeros) * dt_out * traj.grid.h)


def _padded(traj: Trajectory) -> np.ndarray:
    """Snapshots with the boundary zeros appended: shape (n_out+1, n+2)."""
    m = traj.U.shape[0]
    return np.hstack([np.zeros((m, 1)), traj.U, np.zeros((m, 1))])


def holder_norm(traj: Trajectory, spec: HolderSpec) -> float:
    """Sup norm plus time and space difference-quotient seminorms of the
    piecewise linear representation, evaluated over snapshot/node pairs."""
    if traj.U.shape[0] < 2:
        raise ValueError("need at least two snapshots")
    vals = _padded(traj)
    xs = traj.grid.h * np.arange(traj.grid.n + 2)
    total = float(np.max(np.abs(vals)))
    if spec.gamma1 > 0.0:
        t = traj.times
        dtm = np.abs(t[:, None] - t[None, :]) ** spec.gamma1
        iu = np.triu_indices(len(t), k=1)
        diffs = np.abs(vals[:, None, :] - vals[None, :, :])[iu]
        total += float(np.max(diffs / dtm[iu][:, None]))
    if spec.gamma2 > 0.0:
        dxm = np.abs(xs[:, None] - xs[None, :]) ** spec.gamma2
        iu = np.triu_indices(len(xs), k=1)
        diffs = np.abs(vals[:, :, None] - vals[:, None, :])[:, iu[0], iu[1]]
        total += float(np.max(diffs / dxm[iu][None, :]))
    return total


def time_sobolev_norm(traj: Trajectory, basis: SpectralBasis,
                      spec: TimeSobolevSpec) -> float:
    """Slobodeckii-in-time norm of u^{alpha+1} with spatial index theta,
    estimated by a double Riemann sum over snapshot pairs (diagonal excluded).
    """
    if traj.U.shape[0] < 3:
        raise ValueError("need at least three snapshots")
    alpha = traj.config.alpha
    t = traj.times
    dt_out = traj.config.T / traj.config.n_out
    W = traj.U ** (alpha + 1.0)
    norms_p = discrete_norm(W, basis, spec.theta) ** spec.p
    wts = np.full(len(t), dt_out)
    wts[0] = wts[-1] = 0.5 * dt_out
    lp_part = float(norms_p @ wts)
    m = len(t)
    iu = np.triu_indices(m, k=1)
    pair_norms = discrete_norm(W[iu[0]] - W[iu[1]], basis, spec.theta)
    gaps = np.abs(t[iu[0]] - t[iu[1]])
    semi = 2.0 * float(np.sum(pair_norms**spec.p / gaps ** (1.0 + spec.s * spec.p))
                       * dt_out * dt_out)
    return float((lp_part + semi) ** (1.0 / spec.p))


def beta_exponents(alpha: float) -> tuple[float, float, float]:
    """Time and space Hoelder exponents (beta1, beta2) and the maximal
    time-Sobolev exponent gamma_max, as functions of alpha >= 4."""
    if alpha < 4.0:
        raise ValueError(f"alpha={alpha} below the admissible range [4, inf)")
    beta1 = (alpha - 2.0) * (alpha - 4.0) / (
        4.0 * (alpha - 1.0) * (alpha + 1.0) * (alpha**2 + alpha - 4.0))
    beta2 = (alpha - 4.0) / (2.0 * alpha**2)
    gamma_max = (alpha - 2.0) / (4.0 * (alpha - 1.0) * (alpha + 1.0))
    return beta1, beta2, gamma_max


@dataclass(frozen=True)
class MartingaleDiagnostics:
    mean_m1: np.ndarray           # (k_phi,)
    se_m1: np.ndarray
    mean_m2: np.ndarray           # mean of M1^2 - QV compensator
    se_m2: np.ndarray
    paths: int


def martingale_residual(trajs: Sequence[Trajectory]) -> MartingaleDiagnostics:
    """Ensemble martingale diagnostics from the per-path accumulators.

    M1(T) = <phi, u(T) - u(0)> - int <phi, drift> - int <phi, eta>; its
    compensated square uses the quadratic variation recorded along the path.
    """
    if not trajs:
        raise ValueError("empty ensemble")
    ref = trajs[0]
    if ref.phi is None:
        raise ValueError("trajectories carry no martingale accumulators")
    from dataclasses import replace

    for tr in trajs[1:]:
        # the seed may differ across an ensemble, everything else must match
        if (replace(tr.config, seed=0) != replace(ref.config, seed=0)
                or tr.grid.n != ref.grid.n):
            raise ValueError("mismatched configs across ensemble")
    h = ref.grid.h
    m1s, m2s = [], []
    for tr in trajs:
        du = tr.U[-1] - tr.U[0]
        m1 = h * (tr.phi @ du) - tr.m1_drift[-1] - tr.m1_eta[-1]
        m1s.append(m1)
        m2s.append(m1**2 - tr.m1_qv[-1])
    m1s = np.array(m1s)
    m2s = np.array(m2s)
    M = len(trajs)
    se = lambda a: np.std(a, axis=0, ddof=1) / np.sqrt(M) if M > 1 else np.zeros(a.shape[1])
    return MartingaleDiagnostics(
        mean_m1=m1s.mean(axis=0), se_m1=se(m1s),
        mean_m2=m2s.mean(axis=0), se_m2=se(m2s), paths=M)


def occupation_near_zero(traj: Trajectory, eps: float) -> np.ndarray:
    """Per-component estimate of the quadratic variation accumulated while
    0 < u_i < eps, from the per-step records."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if traj.step_u is None or traj.step_qv is None:
        raise ValueError("trajectory lacks per-step records")
    mask = (traj.step_u > 0.0) & (traj.step_u < eps)
    return np.sum(np.where(mask, traj.step_qv, 0.0), axis=0)
