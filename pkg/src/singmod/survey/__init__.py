from .scanner import (
    CSV_COLUMNS,
    DiscriminantRecord,
    median_abs_residual,
    read_csv,
    scan,
    summarize,
    write_csv,
)
from .duke import DukeHistogram, GridSpec, cell_measure, duke_histogram, mean_abs_deviation

__all__ = [
    "CSV_COLUMNS",
    "DiscriminantRecord",
    "DukeHistogram",
    "GridSpec",
    "cell_measure",
    "duke_histogram",
    "mean_abs_deviation",
    "median_abs_residual",
    "read_csv",
    "scan",
    "summarize",
    "write_csv",
]
