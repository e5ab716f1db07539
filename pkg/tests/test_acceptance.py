"""Acceptance gate: twelve criteria covering the exact identities, the
bounded-ratio suites, deterministic dissipation, reflection bookkeeping,
martingale diagnostics, cross-level moment stability, coupled convergence,
stickiness, and output determinism.  Each test prints one pass/fail line."""

import time

import numpy as np
import pytest

from sticky_spme.checks import (check_coercivity, check_norm_equivalence,
                                check_poincare, check_ratio_drift_suites,
                                check_spectral_exactness)
from sticky_spme.cli import main
from sticky_spme.coeffs import Nemytskii, NoiseColoring
from sticky_spme.functionals import energy, martingale_residual
from sticky_spme.grid import make_grid, project_pc
from sticky_spme.harness import (ExperimentPlan, build_initial, run_convergence,
                                 run_moments, run_stickiness)
from sticky_spme.sde import SdeConfig, make_system, path_rng, simulate_path


def _report(name: str, passed: bool, detail: str = ""):
    print(f"{'PASS' if passed else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
    assert passed, f"{name} failed: {detail}"


def test_criterion_01_spectral_exactness():
    results = check_spectral_exactness()
    worst = {r.name: r.value for r in results}
    _report("criterion-01 spectral exactness",
            all(r.passed for r in results),
            f"rayleigh {worst['eigenpair_rayleigh']:.2e} (<=1e-10), "
            f"orthonormality {worst['eigenvector_orthonormality']:.2e} (<=1e-12)")


def test_criterion_02_coercivity_identity():
    r = check_coercivity()
    _report("criterion-02 coercivity identity", r.passed,
            f"max relative deviation {r.value:.2e} (<=1e-12)")


def test_criterion_03_poincare_monotonicity():
    r = check_poincare(samples=500)
    _report("criterion-03 fractional norm monotonicity", r.passed,
            f"{int(r.value)} violations over 9-point theta grid x 500 samples")


def test_criterion_04_norm_equivalence():
    r = check_norm_equivalence(samples=200)
    _report("criterion-04 norm equivalence factor (1+pi^-2)^(1/2)", r.passed,
            f"{int(r.value)} violations over 200 band functions x 5 orders")


def test_criterion_05_bounded_ratio_suites():
    t0 = time.time()
    results = check_ratio_drift_suites(samples=1000)
    elapsed = time.time() - t0
    bad = [r.name for r in results if not r.passed]
    _report("criterion-05 bounded-ratio suites",
            not bad and elapsed < 60.0,
            f"{len(results)} suites, max drift "
            f"{max(r.value for r in results):.3f} (<=0.25), {elapsed:.1f}s (<60s)"
            + (f", failed: {bad}" if bad else ""))


def test_criterion_06_deterministic_dissipation():
    t0 = time.time()
    n = 63
    g = make_grid(n)
    sys_ = make_system(g, Nemytskii(b0=0.0), Nemytskii(b0=0.0),
                       NoiseColoring(c=0.5, q=2.0, n_modes=8))
    u0 = build_initial(g, "sine_bump", 0.5)
    residuals = {}
    mono_ok = True
    for dt in (2e-5, 1e-5):
        cfg = SdeConfig(T=0.005, dt_max=dt, n_out=50,
                        coupling_mode="fixed-dt", seed=0)
        tr = simulate_path(sys_, cfg, u0, path_rng(0, 0))
        E = np.array([energy(u, g.h, 4.0) for u in tr.U])
        mono_ok &= bool(np.all(np.diff(E) <= 1e-12 * E[0]))
        # first-order defect of the exact dissipation balance
        residuals[dt] = abs(E[-1] - E[0] + 5.0 * tr.diss_int[-1])
    ratio = residuals[2e-5] / residuals[1e-5]
    elapsed = time.time() - t0
    _report("criterion-06 deterministic energy dissipation",
            mono_ok and 1.6 <= ratio <= 2.4 and elapsed < 30.0,
            f"nonincreasing={mono_ok}, residual ratio {ratio:.3f} "
            f"(2.0 +/- 20%), {elapsed:.1f}s (<30s)")


def test_criterion_07_nonnegativity_and_K_reconstruction():
    n = 15
    g = make_grid(n)
    r0 = 1.0
    sys_ = make_system(g, Nemytskii(b0=1.0), Nemytskii(b0=r0),
                       NoiseColoring(c=0.5, q=2.0, n_modes=64))
    cfg = SdeConfig(T=0.02, dt_max=5e-5, n_out=20,
                    coupling_mode="fixed-dt", seed=3)
    tr = simulate_path(sys_, cfg, np.zeros(n), path_rng(3, 0),
                       record_steps=True)
    nonneg = bool(np.all(tr.U >= 0.0)) and bool(np.all(tr.step_u >= 0.0))
    # replay the pushing process from the per-step records
    dt = cfg.T / cfg.n_out / np.ceil(cfg.T / cfg.n_out / cfg.dt_max - 1e-12)
    K_rec = np.zeros(n)
    for u_start in tr.step_u:
        K_rec = K_rec + np.where(u_start == 0.0, r0 * dt, 0.0)
    ulp = np.spacing(np.maximum(tr.K[-1], K_rec))
    err = np.max(np.abs(K_rec - tr.K[-1]) / (tr.n_steps * np.maximum(ulp, 1e-300)))
    _report("criterion-07 nonnegativity and pushing process reconstruction",
            nonneg and err <= 1.0 and np.any(tr.K[-1] > 0.0),
            f"states nonnegative={nonneg}, K error {err:.3f} ulp/step (<=1)")


def test_criterion_08_martingale_diagnostics():
    t0 = time.time()
    n = 31
    g = make_grid(n)
    sys_ = make_system(g, Nemytskii(b0=0.25, b1=0.5), Nemytskii(b0=1.0),
                       NoiseColoring(c=0.5, q=2.0, n_modes=64))
    cfg = SdeConfig(T=0.05, dt_max=1e-4, n_out=10, seed=77)
    u0 = build_initial(g, "sine_bump", 0.5)
    phi = np.vstack([project_pc(lambda x: np.sin(np.pi * x), g),
                     project_pc(lambda x: x * (1.0 - x), g),
                     np.ones(n)])
    trs = [simulate_path(sys_, cfg, u0, path_rng(77, m), phi=phi)
           for m in range(1024)]
    d = martingale_residual(trs)
    m1_ok = bool(np.all(np.abs(d.mean_m1) <= 3.0 * d.se_m1))
    m2_ok = bool(np.all(np.abs(d.mean_m2) <= 3.0 * d.se_m2))
    elapsed = time.time() - t0
    _report("criterion-08 martingale mean and compensated square",
            m1_ok and m2_ok and elapsed < 180.0,
            f"max |mean M1|/SE {np.max(np.abs(d.mean_m1) / d.se_m1):.2f} (<=3), "
            f"max |mean M2|/SE {np.max(np.abs(d.mean_m2) / d.se_m2):.2f} (<=3), "
            f"1024 paths, {elapsed:.1f}s (<180s)")


_B = Nemytskii(b0=0.25, b1=0.5)
_R = Nemytskii(b0=1.0)
_COL = NoiseColoring(c=0.5, q=2.0, n_modes=128)


def test_criterion_09_moment_stability_across_levels():
    t0 = time.time()
    plan = ExperimentPlan(n_levels=(15, 31, 63), paths=256, coupling=True,
                          p_list=(2.0,), master_seed=55)
    cfg = SdeConfig(T=0.02, dt_max=5e-5, n_out=20,
                    coupling_mode="fixed-dt", seed=55)
    rep = run_moments(plan, cfg, _B, _R, _COL, "sine_bump", 0.5)
    ok = True
    spans = {}
    for name in ("sup_energy_p2", "sup_genergy_p2"):
        vals = [rep.lookup(n, 2.0, name).estimate for n in plan.n_levels]
        spans[name] = max(vals) / min(vals)
        ok &= spans[name] <= 2.0
    elapsed = time.time() - t0
    _report("criterion-09 moment stability across mesh levels",
            ok and elapsed < 300.0,
            f"level spread sup-energy x{spans['sup_energy_p2']:.3f}, "
            f"sup-G x{spans['sup_genergy_p2']:.3f} (<=2), {elapsed:.1f}s (<300s)")


def test_criterion_10_coupled_convergence():
    t0 = time.time()
    plan = ExperimentPlan(n_levels=(15, 31, 63), paths=256, coupling=True,
                          master_seed=55)
    cfg = SdeConfig(T=0.02, dt_max=5e-5, n_out=20,
                    coupling_mode="fixed-dt", seed=55)
    rep = run_convergence(plan, cfg, _B, _R, _COL, "sine_bump", 0.5)
    (_, _, g1, s1, _), (_, _, g2, s2, _) = rep.rows
    stoch_ok = g2 < g1 - 2.0 * np.hypot(s1, s2)
    # deterministic run over three nested pairs
    det = Nemytskii(b0=0.0)
    dplan = ExperimentPlan(n_levels=(15, 31, 63, 127), paths=1, coupling=True,
                           master_seed=0)
    drep = run_convergence(dplan, cfg, det, Nemytskii(b0=0.0), _COL,
                           "sine_bump", 0.5)
    dgaps = [row[2] for row in drep.rows]
    det_ok = all(b < a for a, b in zip(dgaps, dgaps[1:]))
    elapsed = time.time() - t0
    _report("criterion-10 coupled cross-level convergence",
            stoch_ok and det_ok and elapsed < 300.0,
            f"stochastic gaps {g1:.4f} -> {g2:.4f} (2SE margin), deterministic "
            f"gaps {['%.1e' % v for v in dgaps]} monotone, {elapsed:.1f}s (<300s)")


def test_criterion_11_stickiness():
    t0 = time.time()
    plan = ExperimentPlan(n_levels=(15, 31, 63), paths=512, master_seed=101)
    cfg = SdeConfig(T=0.05, dt_max=1e-4, n_out=50, seed=101)
    rep = run_stickiness(plan, cfg, Nemytskii(b0=0.5), Nemytskii(b0=1.0),
                         NoiseColoring(c=0.5, q=2.0, n_modes=64))
    pooled = np.concatenate([rep.samples[n] for n in plan.n_levels])
    eps_star = float(np.quantile(pooled, 0.2))
    probs = {n: float(np.mean(rep.samples[n] >= eps_star))
             for n in plan.n_levels}
    ok = eps_star > 0.0 and all(p >= 0.5 for p in probs.values())
    elapsed = time.time() - t0
    _report("criterion-11 stickiness from flat start",
            ok and elapsed < 300.0,
            f"eps*={eps_star:.2e} (pooled 20th pct), P(S>=eps*)="
            f"{[round(probs[n], 3) for n in plan.n_levels]} (>=0.5 each), "
            f"{elapsed:.1f}s (<300s)")


def test_criterion_12_thread_determinism(tmp_path, monkeypatch):
    cfgp = tmp_path / "run.cfg"
    cfgp.write_text("seed = 19\nn = 15\nn_levels = 15,31\npaths = 8\n"
                    "T = 0.01\ndt_max = 5e-5\nn_out = 8\n"
                    f"out_dir = {tmp_path}\n")
    outs = {}
    for threads in ("1", "8"):
        monkeypatch.setenv("STICKY_SPME_THREADS", threads)
        for cmd, fname in (("moments", "m"), ("stickiness", "s"),
                           ("converge", "c")):
            out = tmp_path / f"{fname}{threads}.csv"
            assert main([cmd, "--config", str(cfgp), "--out", str(out)]) == 0
            outs[(cmd, threads)] = out.read_bytes()
    same = all(outs[(c, "1")] == outs[(c, "8")]
               for c in ("moments", "stickiness", "converge"))
    _report("criterion-12 byte-identical reports across thread counts", same,
            "moments, stickiness and convergence CSVs match under 1 and 8 workers")
