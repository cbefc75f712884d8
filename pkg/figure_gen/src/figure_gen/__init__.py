"""Batch figure rendering for simulation CSV output.

Reads the harness's per-trial rows, aggregates mean and standard error of the
average sum-rate per (method, x) group, and renders one line plot with error
bars per method. All statistics are computed here from the raw rows; the
component performs no simulation of its own.
"""

from .plots import FigureSpec, aggregate, build_figure, load_rows, render

__version__ = "0.1.0"
