"""Static figure rendering for reconstruction experiment outputs."""

from .render import MissingColumnError, PlotSpec, load_errors, load_table, render, render_figure

__version__ = "0.1.0"
