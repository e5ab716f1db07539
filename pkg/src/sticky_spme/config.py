"""Flat key=value run configuration shared by all CLI commands."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .coeffs import Nemytskii, NoiseColoring
from .harness import ExperimentPlan
from .sde import SdeConfig

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config"]


class ConfigError(ValueError):
    pass


def _parse_float_list(s: str) -> tuple[float, ...]:
    return tuple(float(x) for x in s.split(",") if x.strip())


def _parse_int_list(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.split(",") if x.strip())


_SCHEMA = {
    # simulation
    "n": int,
    "alpha": float,
    "kappa": float,
    "dt_max": float,
    "c_cfl": float,
    "T": float,
    "coupling_mode": str,
    "truncation": str,
    "seed": int,
    "n_out": int,
    # coefficients
    "b0": float,
    "b1": float,
    "r0": float,
    "r1": float,
    "mu_c": float,
    "mu_q": float,
    "n_modes": int,
    # experiment plan
    "n_levels": _parse_int_list,
    "paths": int,
    "p_list": _parse_float_list,
    "gamma1": float,
    "gamma2": float,
    "epsilons": _parse_float_list,
    # initial datum
    "u0_kind": str,
    "u0_amplitude": float,
    "u0_power": float,
    # output
    "out_dir": str,
}

_DEFAULTS = {
    "alpha": 4.0,
    "kappa": 1.0,
    "dt_max": 1e-4,
    "c_cfl": 0.5,
    "T": 0.05,
    "coupling_mode": "adaptive",
    "truncation": "hard-stop",
    "n_out": 64,
    "b0": 0.5,
    "b1": 0.0,
    "r0": 1.0,
    "r1": 0.0,
    "mu_c": 0.5,
    "mu_q": 2.0,
    "n_modes": 512,
    "p_list": (1.0, 2.0),
    "gamma1": 0.0,
    "gamma2": 0.0,
    "u0_kind": "sine_bump",
    "u0_amplitude": 1.0,
    "u0_power": 1.0,
    "out_dir": ".",
}


@dataclass(frozen=True)
class RunConfig:
    values: dict

    def require(self, key: str):
        if key not in self.values:
            raise ConfigError(f"missing required key: {key}")
        return self.values[key]

    def get(self, key: str):
        return self.values[key]

    def sde_config(self, fixed_dt: bool = False) -> SdeConfig:
        v = self.values
        mode = "fixed-dt" if fixed_dt else v["coupling_mode"]
        try:
            return SdeConfig(alpha=v["alpha"], kappa=v["kappa"], dt_max=v["dt_max"],
                             c_cfl=v["c_cfl"], T=v["T"], coupling_mode=mode,
                             truncation=v["truncation"], seed=self.require("seed"),
                             n_out=v["n_out"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def coefficients(self) -> tuple[Nemytskii, Nemytskii, NoiseColoring]:
        v = self.values
        try:
            b = Nemytskii(b0=v["b0"], b1=v["b1"])
            r = Nemytskii(b0=v["r0"], b1=v["r1"])
            coloring = NoiseColoring(c=v["mu_c"], q=v["mu_q"], n_modes=v["n_modes"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return b, r, coloring

    def plan(self, coupling: bool = False) -> ExperimentPlan:
        v = self.values
        if "n_levels" not in v:
            raise ConfigError("missing required key: n_levels")
        if "paths" not in v:
            raise ConfigError("missing required key: paths")
        try:
            return ExperimentPlan(n_levels=tuple(v["n_levels"]), paths=v["paths"],
                                  coupling=coupling, p_list=tuple(v["p_list"]),
                                  gamma1=v["gamma1"], gamma2=v["gamma2"],
                                  master_seed=self.require("seed"),
                                  epsilons=v.get("epsilons"))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def initial_args(self) -> tuple[str, float, float]:
        v = self.values
        return v["u0_kind"], v["u0_amplitude"], v["u0_power"]


def parse_config(text: str) -> RunConfig:
    values = dict(_DEFAULTS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, val = (s.strip() for s in line.partition("="))
        if key not in _SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _SCHEMA[key](val)
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {val!r}") from None
    return RunConfig(values=values)


def load_config(path: str | Path) -> RunConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    return parse_config(p.read_text())
