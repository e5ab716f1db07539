"""Figure renderers, one per CSV kind.

All renderers are read-only on their inputs and write a single image file.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import load_table

__all__ = ["render_heatmap", "render_energy", "render_moments",
           "render_convergence", "render_stickiness"]


def _trajectory_grid(cols):
    """Reshape the long-format trajectory table to (times, nodes, U, K)."""
    times = np.unique(cols["t"])
    nodes = np.unique(cols["x"])
    nt, nx = len(times), len(nodes)
    if nt * nx != len(cols["t"]):
        raise ValueError("trajectory table is not a complete (t, x) grid")
    order = np.lexsort((cols["x"], cols["t"]))
    U = cols["u"][order].reshape(nt, nx)
    K = cols["K"][order].reshape(nt, nx)
    return times, nodes, U, K


def render_heatmap(in_path, out_path, dpi=150):
    times, nodes, U, _ = _trajectory_grid(load_table(in_path, "trajectory"))
    fig, ax = plt.subplots(figsize=(6, 4))
    mesh = ax.pcolormesh(times, nodes, U.T, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="u")
    ax.set_xlabel("t")
    ax.set_ylabel("x")
    ax.set_title("state space-time heatmap")
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)


def render_energy(in_path, out_path, dpi=150, alpha=4.0):
    times, nodes, U, K = _trajectory_grid(load_table(in_path, "trajectory"))
    # interior cell width; nodes sit at h, 2h, ...
    h = nodes[0] if len(nodes) else 1.0
    energy = h * np.sum(U ** (alpha + 1.0), axis=1)
    mass = h * np.sum(U, axis=1)
    pushed = h * np.sum(K, axis=1)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(times, energy, label=f"energy (power {alpha + 1:g})")
    ax.plot(times, mass, label="mass")
    ax.plot(times, pushed, label="integrated pushing")
    ax.set_xlabel("t")
    ax.legend()
    ax.set_title("energy and mass traces")
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)


def render_moments(in_path, out_path, dpi=150):
    cols = load_table(in_path, "moments")
    fig, ax = plt.subplots(figsize=(7, 4))
    names = list(dict.fromkeys(cols["functional"]))
    levels = np.unique(cols["n"]).astype(int)
    width = 0.8 / max(len(names), 1)
    for j, name in enumerate(names):
        sel = cols["functional"] == name
        # one bar group per level, keeping the first power listed per name
        ests, errs = [], []
        for n in levels:
            m = sel & (cols["n"] == n)
            ests.append(cols["estimate"][m][0] if m.any() else np.nan)
            errs.append(cols["stderr"][m][0] if m.any() else 0.0)
        pos = np.arange(len(levels)) + (j - 0.5 * (len(names) - 1)) * width
        ax.bar(pos, ests, width=width, yerr=errs, capsize=2, label=str(name))
    ax.set_xticks(np.arange(len(levels)), [str(n) for n in levels])
    ax.set_xlabel("n")
    ax.set_ylabel("estimate")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    ax.set_title("moment estimates by mesh level")
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)


def render_convergence(in_path, out_path, dpi=150):
    cols = load_table(in_path, "convergence")
    n_fine = cols["n_fine"]
    gap = cols["gap"]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.errorbar(n_fine, gap, yerr=cols["stderr"], fmt="o-", capsize=3)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("n (fine level)")
    ax.set_ylabel("coupled gap")
    if len(n_fine) >= 2 and np.all(gap > 0.0):
        slope = np.polyfit(np.log(n_fine), np.log(gap), 1)[0]
        ax.annotate(f"slope {slope:.2f}", xy=(0.05, 0.05),
                    xycoords="axes fraction")
    ax.set_title("cross-level convergence")
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)


def render_stickiness(in_path, out_path, dpi=150):
    cols = load_table(in_path, "stickiness")
    fig, ax = plt.subplots(figsize=(6, 4))
    for n in np.unique(cols["n"]).astype(int):
        m = cols["n"] == n
        order = np.argsort(cols["epsilon"][m])
        eps = cols["epsilon"][m][order]
        ax.plot(eps, cols["prob"][m][order], "o-", label=f"n={n}")
        ax.fill_between(eps, cols["ci_lo"][m][order], cols["ci_hi"][m][order],
                        alpha=0.2)
    ax.set_xlabel("epsilon")
    ax.set_ylabel("P(S >= epsilon)")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    ax.set_title("stickiness exceedance probabilities")
    fig.savefig(out_path, dpi=dpi)
    plt.close(fig)
