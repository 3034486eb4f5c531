from .render import (
    C_LINE,
    SCAN_COLUMNS,
    EmptySelectionError,
    PlotSpec,
    SchemaError,
    build_figure,
    load_columns,
    render,
)

__version__ = "0.1.0"
