"""Figure rendering for normsim CSV run directories.

Consumes the simulator's file outputs only; renders the eight standard
figure analogues (ability and value histograms, fostering traces, scatter
fits, charge profiles, and regime comparison bars).
"""

from .data import SchemaError, floats, load_table, read_csv
from .figures import FIGURE_IDS, FigureSpec, plan_figures, render_all, render_figure

__all__ = [
    "SchemaError",
    "read_csv",
    "load_table",
    "floats",
    "FigureSpec",
    "FIGURE_IDS",
    "plan_figures",
    "render_figure",
    "render_all",
]

__version__ = "0.1.0"
