"""Render reconstruction experiment outputs as static figure panels.

Input is the experiment CLI's file pair: reconstruction.csv (columns
t, x_true, y, one column per estimator; y is blank off the sample grid)
and report.json (per-estimator error values).  Output is one overview
panel (true signal plus noisy samples) followed by one panel per selected
estimator with the reported error in the title.

Every displayed number originates in the input files; nothing is
recomputed here.  Rendering is deterministic: the same inputs and spec
produce byte-identical image files.
"""

import csv
import json
import math
from dataclasses import dataclass

import matplotlib
import numpy as np

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "plotview"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

RESERVED_COLUMNS = ("t", "x_true", "y")


class MissingColumnError(ValueError):
    """A requested column is absent from the CSV."""


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    report_path: str
    out_path: str
    estimators: tuple | None = None  # None selects every estimator column
    image_format: str | None = None  # inferred from out_path when None

    def resolved_format(self) -> str:
        fmt = self.image_format
        if fmt is None:
            suffix = str(self.out_path).rsplit(".", 1)
            fmt = suffix[1].lower() if len(suffix) == 2 else "png"
        if fmt not in ("png", "svg"):
            raise ValueError(f"image format must be png or svg, got {fmt!r}")
        return fmt


@dataclass(frozen=True)
class Table:
    times: np.ndarray
    x_true: np.ndarray
    sample_times: np.ndarray
    sample_values: np.ndarray
    estimators: dict


def load_table(csv_path) -> Table:
    with open(csv_path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    for required in ("t", "x_true", "y"):
        if required not in header:
            raise MissingColumnError(f"column {required!r} missing from {csv_path}")
    idx = {name: header.index(name) for name in header}
    names = [name for name in header if name not in RESERVED_COLUMNS]

    times = np.array([float(r[idx["t"]]) for r in rows])
    x_true = np.array([float(r[idx["x_true"]]) for r in rows])
    mask = np.array([r[idx["y"]] != "" for r in rows])
    sample_values = np.array([float(r[idx["y"]]) for r, keep in zip(rows, mask) if keep])
    estimators = {}
    for name in names:
        col = np.array([float(r[idx[name]]) if r[idx[name]] != "" else math.nan
                        for r in rows])
        estimators[name] = col
    return Table(times=times, x_true=x_true, sample_times=times[mask],
                 sample_values=sample_values, estimators=estimators)


def load_errors(report_path) -> dict:
    with open(report_path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return {entry["name"]: entry.get("error") for entry in doc.get("estimators", [])}


def _panel_title(name: str, error) -> str:
    if error is None:
        return f"{name} reconstruction"
    return f"{name} reconstruction (error {error:.4f})"


def render_figure(spec: PlotSpec):
    """Build the figure: overview on top, two estimator panels per row."""
    table = load_table(spec.csv_path)
    errors = load_errors(spec.report_path)

    if spec.estimators is None:
        selected = list(table.estimators)
    else:
        selected = list(spec.estimators)
        for name in selected:
            if name not in table.estimators:
                raise MissingColumnError(
                    f"estimator column {name!r} missing from {spec.csv_path}")

    panel_rows = math.ceil(len(selected) / 2)
    fig = plt.figure(figsize=(10.0, 2.8 * (1 + panel_rows)))
    grid = fig.add_gridspec(1 + panel_rows, 2)

    overview = fig.add_subplot(grid[0, :])
    overview.plot(table.times, table.x_true, color="green", lw=1.0,
                  label="original signal")
    overview.plot(table.sample_times, table.sample_values, ".", color="red",
                  ms=3.5, label="samples")
    overview.set_title("original signal and noisy samples")
    overview.legend(loc="upper right", fontsize=8)
    overview.set_xlabel("t")

    for i, name in enumerate(selected):
        ax = fig.add_subplot(grid[1 + i // 2, i % 2])
        ax.plot(table.times, table.x_true, color="green", lw=0.8, alpha=0.7)
        ax.plot(table.sample_times, table.sample_values, ".", color="red",
                ms=2.0, alpha=0.6)
        ax.plot(table.times, table.estimators[name], color="blue", lw=1.0)
        ax.set_title(_panel_title(name, errors.get(name)))
        ax.set_xlabel("t")
    fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> None:
    """Render and write the image file described by the plot settings."""
    fig = render_figure(spec)
    fmt = spec.resolved_format()
    if fmt == "svg":
        metadata = {"Date": None}  # drop the timestamp for reproducible bytes
    else:
        metadata = {"Software": "plotview"}
    try:
        fig.savefig(spec.out_path, format=fmt, dpi=100, metadata=metadata)
    finally:
        plt.close(fig)
