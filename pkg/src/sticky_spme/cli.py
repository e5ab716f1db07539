"""Command line front end: selfcheck, single-path simulation, and the three
Monte Carlo studies, each writing a flat CSV.

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 selfcheck failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .checks import run_all_checks
from .config import ConfigError, load_config
from .grid import make_grid
from .harness import build_initial, run_convergence, run_moments, run_stickiness
from .sde import BlowUpError, make_system, path_rng, simulate_path

__all__ = ["main", "trajectory_csv"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def trajectory_csv(traj) -> str:
    """Long-format trajectory table: one row per (snapshot, node)."""
    lines = ["t,i,x,u,K"]
    nodes = traj.grid.nodes
    for j, t in enumerate(traj.times):
        for i in range(traj.grid.n):
            lines.append(f"{float(t)!r},{i + 1},{float(nodes[i])!r},"
                         f"{float(traj.U[j, i])!r},{float(traj.K[j, i])!r}")
    return "\n".join(lines) + "\n"


def _write(text: str, out: str | None, default_name: str, out_dir: str) -> Path:
    path = Path(out) if out else Path(out_dir) / default_name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def _cmd_selfcheck(args) -> int:
    fault = float(os.environ.get("STICKY_SPME_FAULT_LAMBDA", "0"))
    results = run_all_checks(fault=fault)
    if args.json:
        print(json.dumps([{"name": r.name, "passed": r.passed, "value": r.value,
                           "threshold": r.threshold, "detail": r.detail}
                          for r in results], indent=2))
    else:
        for r in results:
            tag = "PASS" if r.passed else "FAIL"
            print(f"{tag} {r.name}: value={r.value:.3e} threshold={r.threshold:.3e}"
                  + (f" ({r.detail})" if r.detail and not r.passed else ""))
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"selfcheck: {len(failed)} of {len(results)} checks failed",
              file=sys.stderr)
        return 3
    print(f"selfcheck: all {len(results)} checks passed")
    return 0


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    n = cfg.require("n")
    sde = cfg.sde_config()
    b, r, coloring = cfg.coefficients()
    grid = make_grid(n)
    sys_ = make_system(grid, b, r, coloring)
    kind, amp, power = cfg.initial_args()
    u0 = build_initial(grid, kind, amp, power)
    rng = path_rng(sde.seed, 0, 0)
    traj = simulate_path(sys_, sde, u0, rng)
    path = _write(trajectory_csv(traj), args.out, "trajectory.csv",
                  cfg.get("out_dir"))
    summary = {"n": n, "steps": traj.n_steps, "sup_energy": traj.sup_energy,
               "clamps": traj.clamp_count, "stop_time": traj.stop_time,
               "out": str(path)}
    print(json.dumps(summary) if args.json
          else f"wrote {path} ({traj.n_steps} steps)")
    return 0


def _cmd_moments(args) -> int:
    cfg = load_config(args.config)
    plan = cfg.plan(coupling=False)
    sde = cfg.sde_config()
    b, r, coloring = cfg.coefficients()
    kind, amp, power = cfg.initial_args()
    report = run_moments(plan, sde, b, r, coloring, kind, amp, power)
    path = _write(report.to_csv(), args.out, "moments.csv", cfg.get("out_dir"))
    print(json.dumps({"rows": len(report.rows), "out": str(path)}) if args.json
          else f"wrote {path} ({len(report.rows)} rows)")
    return 0


def _cmd_converge(args) -> int:
    cfg = load_config(args.config)
    plan = cfg.plan(coupling=True)
    sde = cfg.sde_config(fixed_dt=True)
    b, r, coloring = cfg.coefficients()
    kind, amp, power = cfg.initial_args()
    report = run_convergence(plan, sde, b, r, coloring, kind, amp, power)
    path = _write(report.to_csv(), args.out, "convergence.csv", cfg.get("out_dir"))
    print(json.dumps({"rows": len(report.rows), "out": str(path)}) if args.json
          else f"wrote {path} ({len(report.rows)} rows)")
    return 0


def _cmd_stickiness(args) -> int:
    cfg = load_config(args.config)
    plan = cfg.plan(coupling=False)
    sde = cfg.sde_config()
    b, r, coloring = cfg.coefficients()
    report = run_stickiness(plan, sde, b, r, coloring)
    path = _write(report.to_csv(), args.out, "stickiness.csv", cfg.get("out_dir"))
    print(json.dumps({"rows": len(report.rows), "out": str(path)}) if args.json
          else f"wrote {path} ({len(report.rows)} rows)")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="sticky-spme",
                     description="Sticky-reflected stochastic porous medium "
                                 "simulation and diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("selfcheck", help="run the exact-identity and "
                                          "bounded-ratio check suites")
    sc.add_argument("--json", action="store_true")
    sc.set_defaults(fn=_cmd_selfcheck)

    for name, fn, hlp in (
            ("simulate", _cmd_simulate, "integrate one path, write t,i,x,u,K"),
            ("moments", _cmd_moments, "moment table across mesh levels"),
            ("converge", _cmd_converge, "coupled-noise cross-level gaps"),
            ("stickiness", _cmd_stickiness, "zero-set occupation probabilities")):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("--config", required=True)
        p.add_argument("--out")
        p.add_argument("--json", action="store_true")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except BlowUpError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
