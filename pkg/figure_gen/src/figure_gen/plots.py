"""Aggregation and plotting of per-trial sum-rate rows."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

VALUE_COLUMN = "avg_sum_rate_bps_hz"

_X_LABELS = {
    "snr_db": "SNR (dB)",
    "n_s": "Data streams per subcarrier",
    "n_antennas": "Antennas per array",
}

# stable ids inside SVG output so identical input gives identical bytes
plt.rcParams["svg.hashsalt"] = "figure-gen"


@dataclass
class FigureSpec:
    """What to plot: input CSV, x-axis column, grouping column, output path."""

    csv_path: str
    x_column: str
    out_path: str
    group_column: str = "method"
    title: str | None = None
    x_label: str | None = None
    y_label: str = "Average sum-rate (bits/s/Hz)"


def load_rows(csv_path, required_columns) -> pd.DataFrame:
    """Read the harness CSV and check the columns the figure needs."""
    try:
        df = pd.read_csv(csv_path)
    except pd.errors.EmptyDataError as exc:
        raise ValueError(f"empty CSV: {csv_path}") from exc
    for col in required_columns:
        if col not in df.columns:
            raise ValueError(
                f"column '{col}' not found in CSV header (have: {', '.join(df.columns)})"
            )
    if len(df) == 0:
        raise ValueError(f"CSV has a header but no rows: {csv_path}")
    return df


def aggregate(
    df: pd.DataFrame,
    x_column: str,
    group_column: str = "method",
    value_column: str = VALUE_COLUMN,
) -> pd.DataFrame:
    """Mean, standard error and count of the value per (group, x) cell."""
    grouped = df.groupby([group_column, x_column], sort=True)[value_column]
    out = grouped.agg(mean="mean", std="std", n="count").reset_index()
    out["stderr"] = (out["std"] / np.sqrt(out["n"])).fillna(0.0)
    return out.drop(columns=["std"])


def build_figure(spec: FigureSpec):
    """Aggregate the CSV and return the assembled matplotlib figure."""
    df = load_rows(spec.csv_path, (spec.x_column, spec.group_column, VALUE_COLUMN))
    stats = aggregate(df, spec.x_column, spec.group_column)

    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    markers = ["o", "s", "^", "d", "v", "*"]
    for i, (name, block) in enumerate(stats.groupby(spec.group_column, sort=True)):
        block = block.sort_values(spec.x_column)
        ax.errorbar(
            block[spec.x_column],
            block["mean"],
            yerr=block["stderr"],
            marker=markers[i % len(markers)],
            capsize=3,
            linewidth=1.5,
            label=str(name),
        )
    ax.set_xlabel(spec.x_label or _X_LABELS.get(spec.x_column, spec.x_column))
    ax.set_ylabel(spec.y_label)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render the figure to ``spec.out_path`` (png or svg) and return the path."""
    fig = build_figure(spec)
    out = Path(spec.out_path)
    metadata = {"Date": None} if out.suffix.lower() == ".svg" else None
    fig.savefig(out, dpi=150, metadata=metadata)
    plt.close(fig)
    return str(out)
