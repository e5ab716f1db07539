"""Explicit time stepping for the sticky-reflected discrete porous medium
system

    du = -L(u^alpha) dt + 1_{u>0} . B_n(u) dW + 1_{u=0} . r_n(u) dt,

with componentwise clamping at zero realizing the reflection, exact-zero
indicator bookkeeping for the pushing process K, and an energy-threshold
truncation (hard stop or smooth cutoff) of all coefficient groups.

The "at zero" predicate is exact floating-point equality: the clamp writes
literal zeros, so no threshold is needed and 1_{u>0} is the exact complement.
All indicators are evaluated at the step's start state (left-point Ito
convention).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .coeffs import Nemytskii, NoiseColoring, _sine_cell_averages
from .grid import Grid
from .spectral import apply_laplacian

__all__ = [
    "SdeConfig",
    "SdeState",
    "Trajectory",
    "BlowUpError",
    "System",
    "make_system",
    "drift_pme",
    "sample_increments",
    "smooth_cutoff",
    "step",
    "simulate_path",
    "path_rng",
]


class BlowUpError(RuntimeError):
    def __init__(self, step_index: int, t: float):
        super().__init__(f"non-finite state at step {step_index}, t={t:.6g}")
        self.step_index = step_index
        self.t = t


@dataclass(frozen=True)
class SdeConfig:
    alpha: float = 4.0
    kappa: float = 1.0
    dt_max: float = 1e-4
    c_cfl: float = 0.5
    T: float = 0.05
    coupling_mode: str = "adaptive"      # "adaptive" | "fixed-dt"
    truncation: str = "hard-stop"        # "hard-stop" | "smooth-sigma"
    seed: int = 0
    n_out: int = 64

    def __post_init__(self):
        if self.alpha < 4.0:
            raise ValueError(f"alpha={self.alpha} below the admissible range [4, inf)")
        if self.kappa <= 0.0 or self.dt_max <= 0.0 or self.T <= 0.0:
            raise ValueError("kappa, dt_max and T must be positive")
        if not 0.0 < self.c_cfl <= 1.0:
            raise ValueError("c_cfl must lie in (0, 1]")
        if self.coupling_mode not in ("adaptive", "fixed-dt"):
            raise ValueError(f"unknown coupling_mode {self.coupling_mode!r}")
        if self.truncation not in ("hard-stop", "smooth-sigma"):
            raise ValueError(f"unknown truncation {self.truncation!r}")
        if self.n_out < 1:
            raise ValueError("n_out must be positive")


@dataclass
class SdeState:
    t: float
    u: np.ndarray
    K: np.ndarray
    stopped: bool = False
    clamp_count: int = 0


@dataclass(eq=False)
class Trajectory:
    grid: Grid
    config: SdeConfig
    times: np.ndarray
    U: np.ndarray                 # (n_out+1, n) state snapshots
    K: np.ndarray                 # (n_out+1, n) pushing process snapshots
    qv_comp: np.ndarray           # (n_out+1, n) cumulative int 1_{u>0}.Sigma_n dt
    diss_int: np.ndarray          # (n_out+1,) cumulative int |u^alpha|_{H1}^2 dt
    sup_energy: float
    clamp_count: int
    n_steps: int
    stop_time: Optional[float] = None
    phi: Optional[np.ndarray] = None          # (k_phi, n) test vectors (cell averages)
    m1_drift: Optional[np.ndarray] = None     # (n_out+1, k_phi) int <phi, drift> dt
    m1_eta: Optional[np.ndarray] = None       # (n_out+1, k_phi) int <phi, eta> dt
    m1_qv: Optional[np.ndarray] = None        # (n_out+1, k_phi) QV of M1
    step_t: Optional[np.ndarray] = None       # per-step records when requested
    step_u: Optional[np.ndarray] = None
    step_qv: Optional[np.ndarray] = None      # per-step QV increments (n_steps, n)


@dataclass(frozen=True, eq=False)
class System:
    """Precomputed discretization data shared by all steps of a path."""

    grid: Grid
    b: Nemytskii
    r: Nemytskii
    coloring: NoiseColoring
    n_modes: int                   # modes retained at this level
    mu: np.ndarray                 # (n_modes,)
    g_avg: np.ndarray              # (n_modes, n) cell averages of g_k
    noise_floor: np.ndarray        # (n,) sum_k mu_k^2 g_avg[k]^2
    b_profile: np.ndarray          # (n,) cell averages of b's x-profile (ones if none)
    r_profile: np.ndarray


def make_system(grid: Grid, b: Nemytskii, r: Nemytskii, coloring: NoiseColoring) -> System:
    from .grid import project_pc

    n_modes = min(grid.n, coloring.n_modes)
    k = np.arange(1, n_modes + 1)
    g_avg = _sine_cell_averages(grid, k)
    mu = coloring.mu(n_modes)
    noise_floor = mu**2 @ g_avg**2
    ones = np.ones(grid.n)
    b_profile = project_pc(b.x_profile, grid) if b.x_profile is not None else ones
    r_profile = project_pc(r.x_profile, grid) if r.x_profile is not None else ones
    return System(grid=grid, b=b, r=r, coloring=coloring, n_modes=n_modes, mu=mu,
                  g_avg=g_avg, noise_floor=noise_floor,
                  b_profile=b_profile, r_profile=r_profile)


def drift_pme(u: np.ndarray, grid: Grid, alpha: float) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if np.any(u < 0.0):
        raise ValueError("drift evaluated at negative state")
    return -apply_laplacian(u**alpha, grid)


def sample_increments(rng: np.random.Generator, n_modes: int, dt: float) -> np.ndarray:
    """Independent Brownian mode increments, variance dt each."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    return np.sqrt(dt) * rng.standard_normal(n_modes)


def path_rng(master_seed: int, *stream: int) -> np.random.Generator:
    """Deterministic per-path stream from (master seed, stream indices)."""
    return np.random.default_rng([master_seed, *stream])


def smooth_cutoff(x: float) -> float:
    """C-infinity cutoff: 1 on [0,1], 0 on [2,inf), smooth in between."""
    if x <= 1.0:
        return 1.0
    if x >= 2.0:
        return 0.0
    a = np.exp(-1.0 / (2.0 - x))
    b = np.exp(-1.0 / (x - 1.0))
    return float(a / (a + b))


def energy_of(u: np.ndarray, h: float, alpha: float) -> float:
    return float(h * np.sum(u ** (alpha + 1.0)))


def step(state: SdeState, config: SdeConfig, sys: System, dz: np.ndarray, dt: float):
    """Advance one explicit Euler-Maruyama step in place.

    Returns ``(qv_increment, diss_increment, drift, eta_rate, cut)`` for the
    caller's accumulators; all quantities reflect the coefficients actually
    applied, including the truncation factor.
    """
    grid = sys.grid
    n = grid.n
    alpha = config.alpha
    u = state.u

    if state.stopped:
        state.t += dt
        z = np.zeros(n)
        return z, 0.0, z, z, 0.0

    energy = energy_of(u, grid.h, alpha)
    threshold = grid.h ** (-config.kappa)
    if config.truncation == "hard-stop":
        if energy >= threshold:
            state.stopped = True
            state.t += dt
            z = np.zeros(n)
            return z, 0.0, z, z, 0.0
        cut = 1.0
    else:
        cut = smooth_cutoff(energy / threshold)

    ind_zero = u == 0.0
    ind_pos = ~ind_zero

    u_alpha = u**alpha
    lap = apply_laplacian(u_alpha, grid)
    drift = -cut * lap

    bu = cut * sys.b_profile * (sys.b.b0 + sys.b.b1 * u)
    noise = bu * ((sys.mu * dz) @ sys.g_avg)
    noise[ind_zero] = 0.0

    eta_rate = np.zeros(n)
    if np.any(ind_zero):
        ru = cut * sys.r_profile * (sys.r.b0 + sys.r.b1 * u)
        eta_rate[ind_zero] = ru[ind_zero]

    u_new = u + drift * dt + noise + eta_rate * dt
    neg = u_new < 0.0
    if np.any(neg):
        state.clamp_count += int(np.sum(neg))
        u_new[neg] = 0.0
    if not np.all(np.isfinite(u_new)):
        raise BlowUpError(step_index=-1, t=state.t)

    qv_inc = np.where(ind_pos, bu**2 * sys.noise_floor, 0.0) * dt
    diss_inc = cut * grid.h * float(u_alpha @ lap) * dt

    state.u = u_new
    state.K = state.K + eta_rate * dt
    state.t += dt
    return qv_inc, diss_inc, drift, eta_rate, cut


def _cfl_dt(u: np.ndarray, config: SdeConfig, grid: Grid) -> float:
    peak = float(np.max(u)) if len(u) else 0.0
    stiff = config.alpha * peak ** (config.alpha - 1.0) + 1.0
    return min(config.dt_max, config.c_cfl * grid.h**2 / stiff)


def simulate_path(sys: System, config: SdeConfig, u0: np.ndarray,
                  rng: np.random.Generator, n_draw: Optional[int] = None,
                  phi: Optional[np.ndarray] = None,
                  record_steps: bool = False) -> Trajectory:
    """Integrate one path to the horizon, sampling n_out uniform snapshots.

    ``n_draw`` fixes how many mode increments are drawn per step (at least the
    retained mode count); coupled cross-level runs pass the finest level's
    count so that all levels consume an identical stream.
    """
    grid = sys.grid
    n = grid.n
    u0 = np.asarray(u0, dtype=float)
    if np.any(u0 < 0.0):
        raise ValueError("initial state must be nonnegative")
    if n_draw is None:
        n_draw = sys.n_modes
    if n_draw < sys.n_modes:
        raise ValueError("n_draw below the retained mode count")

    n_out = config.n_out
    snap_times = config.T * np.arange(n_out + 1) / n_out
    fixed = config.coupling_mode == "fixed-dt"
    if fixed:
        dt_snap = config.T / n_out
        steps_per_snap = max(1, int(np.ceil(dt_snap / config.dt_max - 1e-12)))
        dt_fixed = dt_snap / steps_per_snap

    state = SdeState(t=0.0, u=u0.copy(), K=np.zeros(n))
    mu_sq = sys.mu**2
    k_phi = 0 if phi is None else phi.shape[0]
    if phi is not None:
        phi = np.asarray(phi, dtype=float)

    U = np.empty((n_out + 1, n))
    Ksnap = np.empty((n_out + 1, n))
    qv_snap = np.empty((n_out + 1, n))
    diss_snap = np.empty(n_out + 1)
    m1_drift = np.zeros((n_out + 1, k_phi)) if k_phi else None
    m1_eta = np.zeros((n_out + 1, k_phi)) if k_phi else None
    m1_qv = np.zeros((n_out + 1, k_phi)) if k_phi else None

    qv_acc = np.zeros(n)
    diss_acc = 0.0
    phi_drift_acc = np.zeros(k_phi)
    phi_eta_acc = np.zeros(k_phi)
    phi_qv_acc = np.zeros(k_phi)
    sup_energy = energy_of(state.u, grid.h, config.alpha)
    stop_time = None
    n_steps = 0
    rec_t, rec_u, rec_qv = [], [], []

    def snapshot(j):
        U[j] = state.u
        Ksnap[j] = state.K
        qv_snap[j] = qv_acc
        diss_snap[j] = diss_acc
        if k_phi:
            m1_drift[j] = phi_drift_acc
            m1_eta[j] = phi_eta_acc
            m1_qv[j] = phi_qv_acc

    snapshot(0)
    h = grid.h
    for j in range(1, n_out + 1):
        t_target = snap_times[j]
        while state.t < t_target - 1e-14 * config.T:
            if fixed:
                dt = dt_fixed
            else:
                dt = min(_cfl_dt(state.u, config, grid), t_target - state.t)
            z = rng.standard_normal(n_draw)
            dz = np.sqrt(dt) * z[: sys.n_modes]
            ind_pos_before = state.u > 0.0
            u_start = state.u
            try:
                qv_inc, diss_inc, drift, eta_rate, cut = step(state, config, sys, dz, dt)
            except BlowUpError:
                raise BlowUpError(step_index=n_steps, t=state.t) from None
            n_steps += 1
            qv_acc += qv_inc
            diss_acc += diss_inc
            if k_phi and not state.stopped:
                phi_drift_acc += h * (phi @ drift) * dt
                phi_eta_acc += h * (phi @ eta_rate) * dt
                bu = cut * sys.b_profile * (sys.b.b0 + sys.b.b1 * u_start)
                loads = h * (sys.g_avg @ (phi * (ind_pos_before * bu)).T)  # (n_modes, k_phi)
                phi_qv_acc += (mu_sq @ loads**2) * dt
            if record_steps:
                # start-state values, matching the left-point convention of qv_inc
                rec_t.append(state.t - dt)
                rec_u.append(u_start.copy())
                rec_qv.append(qv_inc)
            e = energy_of(state.u, h, config.alpha)
            if e > sup_energy:
                sup_energy = e
            if state.stopped and stop_time is None:
                stop_time = state.t
        state.t = t_target
        snapshot(j)

    return Trajectory(
        grid=grid, config=config, times=snap_times, U=U, K=Ksnap,
        qv_comp=qv_snap, diss_int=diss_snap, sup_energy=sup_energy,
        clamp_count=state.clamp_count, n_steps=n_steps, stop_time=stop_time,
        phi=phi, m1_drift=m1_drift, m1_eta=m1_eta, m1_qv=m1_qv,
        step_t=np.array(rec_t) if record_steps else None,
        step_u=np.array(rec_u) if record_steps else None,
        step_qv=np.array(rec_qv) if record_steps else None,
    )
