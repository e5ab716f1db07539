"""One entry point per figure kind; flags --in, --out, --dpi.

Header mismatches exit nonzero naming the offending column.
"""

from __future__ import annotations

import argparse
import sys

from .io import HeaderError
from .render import (render_convergence, render_energy, render_heatmap,
                     render_moments, render_stickiness)

__all__ = ["heatmap_main", "energy_main", "moments_main",
           "convergence_main", "stickiness_main"]


def _run(render, description, argv, extra=None):
    parser = argparse.ArgumentParser(description=description)
    parser.add_argument("--in", dest="in_path", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--dpi", type=int, default=150)
    if extra:
        extra(parser)
    args = parser.parse_args(argv)
    kwargs = {"alpha": args.alpha} if hasattr(args, "alpha") else {}
    try:
        render(args.in_path, args.out, dpi=args.dpi, **kwargs)
    except HeaderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def heatmap_main(argv=None):
    return _run(render_heatmap, "space-time heatmap of u from trajectory CSV",
                argv)


def energy_main(argv=None):
    return _run(render_energy, "energy and mass traces from trajectory CSV",
                argv, extra=lambda p: p.add_argument("--alpha", type=float,
                                                     default=4.0))


def moments_main(argv=None):
    return _run(render_moments, "moment estimates by mesh level", argv)


def convergence_main(argv=None):
    return _run(render_convergence, "log-log coupled convergence plot", argv)


def stickiness_main(argv=None):
    return _run(render_stickiness, "stickiness exceedance curves", argv)
