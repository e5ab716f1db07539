import numpy as np
import pytest

from sticky_spme.coeffs import Nemytskii, NoiseColoring
from sticky_spme.grid import eval_pl, make_grid
from sticky_spme.harness import (ExperimentPlan, build_initial, run_convergence,
                                 run_moments, run_stickiness, wilson_interval)
from sticky_spme.sde import SdeConfig

_B = Nemytskii(b0=0.5)
_R = Nemytskii(b0=1.0)
_COL = NoiseColoring(c=0.5, q=2.0, n_modes=64)


def _cfg(**kw):
    base = dict(T=0.004, dt_max=5e-5, n_out=4, seed=0)
    base.update(kw)
    return SdeConfig(**base)


def test_plan_validation():
    with pytest.raises(ValueError):
        ExperimentPlan(n_levels=(31, 15), paths=4)
    with pytest.raises(ValueError):
        ExperimentPlan(n_levels=(15, 30), paths=4, coupling=True)
    ExperimentPlan(n_levels=(15, 31, 63), paths=4, coupling=True)


def test_build_initial_kinds():
    g = make_grid(15)
    assert np.all(build_initial(g, "zero") == 0.0)
    for kind in ("sine_bump", "hat", "two_bumps"):
        u = build_initial(g, kind, amplitude=2.0)
        assert np.all(u >= 0.0)
        assert np.max(u) == pytest.approx(2.0, rel=0.05)
    with pytest.raises(ValueError):
        build_initial(g, "step")


def test_wilson_interval_oracles():
    lo, hi = wilson_interval(0, 0)
    assert (lo, hi) == (0.0, 1.0)
    lo, hi = wilson_interval(5, 10)
    assert lo == pytest.approx(0.2366, abs=2e-4)   # standard z=1.96 value
    assert hi == pytest.approx(0.7634, abs=2e-4)
    lo, hi = wilson_interval(10, 10)
    assert hi == 1.0 and 0.0 < lo < 1.0


def test_run_moments_report_shape():
    plan = ExperimentPlan(n_levels=(7, 15), paths=3, p_list=(1.0, 2.0),
                          gamma1=0.1, gamma2=0.1, master_seed=1)
    rep = run_moments(plan, _cfg(), _B, _R, _COL)
    # per level: 3 functionals x 2 powers + holder row
    assert len(rep.rows) == 2 * (3 * 2 + 1)
    row = rep.lookup(7, 1.0, "sup_energy_p2")
    assert row.paths == 3 and row.estimate > 0.0
    csv = rep.to_csv()
    assert csv.splitlines()[0] == "n,p,functional,estimate,stderr,paths,stopped,clamps"


def test_run_moments_deterministic_across_threads(monkeypatch):
    plan = ExperimentPlan(n_levels=(7,), paths=4, master_seed=3)
    rep1 = run_moments(plan, _cfg(), _B, _R, _COL)
    monkeypatch.setenv("STICKY_SPME_THREADS", "4")
    rep2 = run_moments(plan, _cfg(), _B, _R, _COL)
    assert rep1.to_csv() == rep2.to_csv()


def test_run_convergence_gaps_shrink():
    plan = ExperimentPlan(n_levels=(7, 15, 31), paths=4, coupling=True,
                          master_seed=5)
    cfg = _cfg(coupling_mode="fixed-dt")
    rep = run_convergence(plan, cfg, _B, _R, _COL, u0_kind="sine_bump")
    assert len(rep.rows) == 2
    assert rep.rows[0][:2] == (7, 15)
    gaps = [r[2] for r in rep.rows]
    assert gaps[1] < gaps[0]
    assert rep.to_csv().splitlines()[0] == "n_coarse,n_fine,gap,stderr,paths"


def test_run_convergence_requires_coupling():
    plan = ExperimentPlan(n_levels=(7, 15), paths=2, master_seed=5)
    with pytest.raises(ValueError):
        run_convergence(plan, _cfg(coupling_mode="fixed-dt"), _B, _R, _COL)


def test_run_stickiness_report():
    plan = ExperimentPlan(n_levels=(7, 15), paths=6, master_seed=2,
                          epsilons=(1e-6, 1e-4))
    rep = run_stickiness(plan, _cfg(T=0.01, n_out=8), _B, _R, _COL)
    assert len(rep.rows) == 4
    for n, eps, prob, lo, hi, m in rep.rows:
        assert 0.0 <= lo <= prob <= hi <= 1.0
        assert m == 6
    assert set(rep.samples) == {7, 15}
    assert np.all(rep.samples[7] >= 0.0)
