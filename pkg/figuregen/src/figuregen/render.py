"""Rebuild the two scan scatter figures from a survey CSV.

fig1 plots ht(j(tau_D)) / (3 log|D|) against D with a reference line at 1;
fig2 plots L'/L(1, chi_D) against D with a reference line at the constant
C = -1.057770.  This package deliberately contains no numeric logic beyond
reading the published CSV schema; rendering is a pure function of the CSV
bytes and the plot spec (fixed style profile, metadata-free PNG output).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# published scan schema (the wire contract with the producer)
SCAN_COLUMNS = [
    "D", "h", "ht_j", "ht_j_approx", "L1", "LpL", "LpL_series",
    "gamma_K", "residual", "fig1_ratio", "hdbtt_factor", "route_gap", "status",
]

C_LINE = -1.057770  # reference level for fig2

STYLE = {
    "figure.figsize": (11.0, 4.2),
    "figure.dpi": 110,
    "savefig.dpi": 150,
    "axes.grid": True,
    "grid.alpha": 0.25,
    "font.size": 10,
}

_WHICH = {
    "fig1": ("fig1_ratio", "ht(j(tau_D)) / (3 log|D|)", 1.0),
    "fig2": ("LpL", "L'/L(1, chi_D)", C_LINE),
}


class SchemaError(ValueError):
    """The CSV header does not match the scan schema."""


class EmptySelectionError(ValueError):
    """No plottable rows after filtering."""


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    which: str
    out_image: str
    d_range: tuple[int, int] | None = None

    def __post_init__(self):
        if self.which not in _WHICH:
            raise ValueError("which must be 'fig1' or 'fig2'")


def load_columns(path: str, column: str) -> tuple[np.ndarray, np.ndarray]:
    """(D, value) arrays from successful rows of a scan CSV."""
    ds, vals = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        rd = csv.DictReader(fh)
        if rd.fieldnames != SCAN_COLUMNS:
            raise SchemaError(f"expected scan schema, got header {rd.fieldnames}")
        for row in rd:
            if row["status"] != "ok" or row[column] == "":
                continue
            ds.append(int(row["D"]))
            vals.append(float(row[column]))
    return np.asarray(ds, dtype=np.int64), np.asarray(vals)


def build_figure(spec: PlotSpec):
    """The matplotlib Figure for a spec (separated out so tests can inspect
    axes, reference lines and point counts without touching disk)."""
    column, ylabel, ref = _WHICH[spec.which]
    D, v = load_columns(spec.input_csv, column)
    if spec.d_range is not None:
        lo, hi = spec.d_range
        keep = (D >= lo) & (D <= hi)
        D, v = D[keep], v[keep]
    if len(D) == 0:
        raise EmptySelectionError("no rows selected")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.scatter(D, v, s=1.2, linewidths=0, color="#1f3b70", alpha=0.55)
        ax.axhline(ref, color="#c23b22", linewidth=1.0)
        ax.set_xlabel("D")
        ax.set_ylabel(ylabel)
        ax.set_title(f"{spec.which}: {ylabel}")
        fig.tight_layout()
    return fig


def render(spec: PlotSpec) -> str:
    """Write the figure to spec.out_image; identical inputs give identical
    bytes (metadata suppressed)."""
    fig = build_figure(spec)
    try:
        fig.savefig(spec.out_image, metadata={"Software": None})
    finally:
        plt.close(fig)
    return spec.out_image
