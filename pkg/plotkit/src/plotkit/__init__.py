"""Figure scripts for simulation CSV outputs."""

from .io import HEADERS, HeaderError, load_table
from .render import (render_convergence, render_energy, render_heatmap,
                     render_moments, render_stickiness)

__version__ = "0.1.0"
