"""Monte Carlo experiment orchestration: moment tables across mesh levels,
coupled-noise convergence studies, and the stickiness experiment.

Paths are embarrassingly parallel; every path owns an RNG stream derived from
(master seed, level, path index), and results are reduced in path order, so
reports are byte-identical regardless of worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .coeffs import Nemytskii, NoiseColoring
from .functionals import HolderSpec, g_energy, holder_norm, stickiness
from .grid import Grid, eval_pl, make_grid, project_pl
from .sde import SdeConfig, System, Trajectory, make_system, path_rng, simulate_path
from .spectral import build_basis

__all__ = [
    "ExperimentPlan",
    "MomentRow",
    "MomentReport",
    "ConvergenceReport",
    "StickinessReport",
    "build_initial",
    "run_moments",
    "run_convergence",
    "run_stickiness",
    "wilson_interval",
]


def _workers() -> int:
    return max(1, int(os.environ.get("STICKY_SPME_THREADS", "1")))


@dataclass(frozen=True)
class ExperimentPlan:
    n_levels: tuple[int, ...]
    paths: int
    coupling: bool = False
    p_list: tuple[float, ...] = (1.0, 2.0)
    gamma1: float = 0.0
    gamma2: float = 0.0
    master_seed: int = 0
    epsilons: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if len(self.n_levels) < 1 or any(
                b <= a for a, b in zip(self.n_levels, self.n_levels[1:])):
            raise ValueError("n_levels must be strictly increasing")
        if self.paths < 1:
            raise ValueError("need at least one path")
        if self.coupling:
            for a, b in zip(self.n_levels, self.n_levels[1:]):
                if b != 2 * a + 1:
                    raise ValueError(
                        f"coupled levels must be nested (2n+1), got {a} -> {b}")


def build_initial(grid: Grid, kind: str, amplitude: float = 1.0,
                  power: float = 1.0) -> np.ndarray:
    """Initial datum on the grid: the piecewise linear projection of a named
    profile, clamped at zero (projection can undershoot by O(h^2))."""
    if kind == "zero":
        return np.zeros(grid.n)
    if kind == "sine_bump":
        f = lambda x: amplitude * np.sin(np.pi * x) ** power
    elif kind == "hat":
        f = lambda x: amplitude * (1.0 - np.abs(2.0 * x - 1.0))
    elif kind == "two_bumps":
        f = lambda x: amplitude * np.sin(2.0 * np.pi * x) ** 2
    else:
        raise ValueError(f"unknown initial datum kind {kind!r}")
    return np.maximum(project_pl(f, grid), 0.0)


@dataclass(frozen=True)
class MomentRow:
    n: int
    p: float
    functional: str
    estimate: float
    stderr: float
    paths: int
    stopped: int
    clamps: int


@dataclass
class MomentReport:
    rows: list[MomentRow] = field(default_factory=list)
    partial: bool = False

    def to_csv(self) -> str:
        lines = ["n,p,functional,estimate,stderr,paths,stopped,clamps"]
        for r in self.rows:
            lines.append(f"{r.n},{r.p!r},{r.functional},{r.estimate!r},"
                         f"{r.stderr!r},{r.paths},{r.stopped},{r.clamps}")
        return "\n".join(lines) + "\n"

    def lookup(self, n: int, p: float, functional: str) -> MomentRow:
        for r in self.rows:
            if r.n == n and r.p == p and r.functional == functional:
                return r
        raise KeyError((n, p, functional))


@dataclass
class ConvergenceReport:
    rows: list[tuple[int, int, float, float, int]] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["n_coarse,n_fine,gap,stderr,paths"]
        for nc, nf, gap, se, m in self.rows:
            lines.append(f"{nc},{nf},{gap!r},{se!r},{m}")
        return "\n".join(lines) + "\n"


@dataclass
class StickinessReport:
    rows: list[tuple[int, float, float, float, float, int]] = field(default_factory=list)
    samples: dict[int, np.ndarray] = field(default_factory=dict)

    def to_csv(self) -> str:
        lines = ["n,epsilon,prob,ci_lo,ci_hi,paths"]
        for n, eps, prob, lo, hi, m in self.rows:
            lines.append(f"{n},{eps!r},{prob!r},{lo!r},{hi!r},{m}")
        return "\n".join(lines) + "\n"


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1.0 + z**2 / trials
    center = (p + z**2 / (2 * trials)) / denom
    half = z * np.sqrt(p * (1 - p) / trials + z**2 / (4 * trials**2)) / denom
    # clamp so the interval always contains the point estimate despite rounding
    return (float(max(0.0, min(center - half, p))),
            float(min(1.0, max(center + half, p))))


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    m = len(values)
    mean = float(np.mean(values))
    se = float(np.std(values, ddof=1) / np.sqrt(m)) if m > 1 else 0.0
    return mean, se


def _map_paths(fn: Callable[[int], object], paths: int) -> list:
    workers = _workers()
    if workers == 1:
        return [fn(m) for m in range(paths)]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, range(paths)))


def _level_config(config: SdeConfig, coupling: bool) -> SdeConfig:
    if coupling and config.coupling_mode != "fixed-dt":
        raise ValueError("coupled plans require fixed-dt coupling_mode")
    return config


def run_moments(plan: ExperimentPlan, config: SdeConfig, b: Nemytskii, r: Nemytskii,
                coloring: NoiseColoring, u0_kind: str = "sine_bump",
                u0_amplitude: float = 1.0, u0_power: float = 1.0) -> MomentReport:
    config = _level_config(config, plan.coupling)
    report = MomentReport()
    hspec = HolderSpec(plan.gamma1, plan.gamma2)
    n_draw = min(plan.n_levels[-1], coloring.n_modes) if plan.coupling else None
    for level, n in enumerate(plan.n_levels):
        grid = make_grid(n)
        basis = build_basis(grid)
        sys = make_system(grid, b, r, coloring)
        u0 = build_initial(grid, u0_kind, u0_amplitude, u0_power)

        def one_path(m: int):
            # coupled runs share the stream layout across levels: key on path only
            key = (m,) if plan.coupling else (level, m)
            rng = path_rng(plan.master_seed, *key)
            tr = simulate_path(sys, config, u0, rng, n_draw=n_draw)
            sup_g = max(g_energy(u, basis, config.alpha) for u in tr.U)
            return (tr.sup_energy, tr.diss_int[-1], sup_g,
                    holder_norm(tr, hspec) ** 2,
                    tr.stop_time is not None, tr.clamp_count)

        results = _map_paths(one_path, plan.paths)
        sup_e = np.array([x[0] for x in results])
        diss = np.array([x[1] for x in results])
        sup_g = np.array([x[2] for x in results])
        hold = np.array([x[3] for x in results])
        stopped = sum(x[4] for x in results)
        clamps = sum(x[5] for x in results)

        def add(p, name, values):
            est, se = _mean_se(values)
            report.rows.append(MomentRow(n, p, name, est, se, plan.paths,
                                         stopped, clamps))

        for p in plan.p_list:
            add(p, "sup_energy_p2", sup_e ** (p / 2.0))
            add(p, "dissipation_p", diss ** p)
            add(p, "sup_genergy_p2", sup_g ** (p / 2.0))
        add(2.0, "holder_sq", hold)
    return report


def run_convergence(plan: ExperimentPlan, config: SdeConfig, b: Nemytskii,
                    r: Nemytskii, coloring: NoiseColoring,
                    u0_kind: str = "sine_bump", u0_amplitude: float = 1.0,
                    u0_power: float = 1.0) -> ConvergenceReport:
    if not plan.coupling:
        raise ValueError("convergence study requires a coupled plan")
    config = _level_config(config, True)
    levels = plan.n_levels
    grids = [make_grid(n) for n in levels]
    systems = [make_system(g, b, r, coloring) for g in grids]
    u0s = [build_initial(g, u0_kind, u0_amplitude, u0_power) for g in grids]
    n_draw = min(levels[-1], coloring.n_modes)

    def one_path(m: int) -> list[float]:
        trajs = []
        for sys, u0 in zip(systems, u0s):
            rng = path_rng(plan.master_seed, m)
            trajs.append(simulate_path(sys, config, u0, rng, n_draw=n_draw))
        gaps = []
        for j in range(len(levels) - 1):
            gf = grids[j + 1]
            xs = np.concatenate(([0.0], gf.nodes, [1.0]))
            coarse = np.array([eval_pl(u, grids[j], xs) for u in trajs[j].U])
            fine = np.array([eval_pl(u, gf, xs) for u in trajs[j + 1].U])
            gaps.append(float(np.max(np.abs(coarse - fine))))
        return gaps

    all_gaps = np.array(_map_paths(one_path, plan.paths))
    report = ConvergenceReport()
    for j in range(len(levels) - 1):
        gap, se = _mean_se(all_gaps[:, j])
        report.rows.append((levels[j], levels[j + 1], gap, se, plan.paths))
    return report


def run_stickiness(plan: ExperimentPlan, config: SdeConfig, b: Nemytskii,
                   r: Nemytskii, coloring: NoiseColoring) -> StickinessReport:
    config = _level_config(config, plan.coupling)
    n_draw = min(plan.n_levels[-1], coloring.n_modes) if plan.coupling else None
    report = StickinessReport()
    per_level: dict[int, np.ndarray] = {}
    for level, n in enumerate(plan.n_levels):
        grid = make_grid(n)
        sys = make_system(grid, b, r, coloring)
        u0 = np.zeros(n)

        def one_path(m: int) -> float:
            key = (m,) if plan.coupling else (level, m)
            rng = path_rng(plan.master_seed, *key)
            return stickiness(simulate_path(sys, config, u0, rng, n_draw=n_draw))

        per_level[n] = np.array(_map_paths(one_path, plan.paths))
        report.samples[n] = per_level[n]

    if plan.epsilons is not None:
        eps_grid = list(plan.epsilons)
    else:
        pooled = np.concatenate(list(per_level.values()))
        eps_grid = [float(q) for q in np.quantile(pooled, [0.1, 0.2, 0.5, 0.8])]
    for n in plan.n_levels:
        s = per_level[n]
        for eps in eps_grid:
            hits = int(np.sum(s >= eps))
            lo, hi = wilson_interval(hits, plan.paths)
            report.rows.append((n, float(eps), hits / plan.paths, lo, hi, plan.paths))
    return report
