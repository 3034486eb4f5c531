"""Equidistribution histograms: Heegner points of a discriminant range
binned over the fundamental domain against the hyperbolic measure
(3/pi) dx dy / y^2.

Cell masses come out in closed form: the arc boundary integrates to arcsin
and the horizontal bands to differences of 1/y, so `expected` carries no
quadrature error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bulk

Y_MIN = math.sqrt(3) / 2


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    y_cap: float

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """'NXxNYxYCAP', e.g. '8x6x4.0'."""
        try:
            sx, sy, sc = text.lower().split("x")
            g = cls(nx=int(sx), ny=int(sy), y_cap=float(sc))
        except Exception as exc:
            raise ValueError(f"bad grid spec {text!r}") from exc
        if g.nx < 1 or g.ny < 1 or g.y_cap <= Y_MIN:
            raise ValueError("grid must have nx, ny >= 1 and y_cap > sqrt(3)/2")
        return g


@dataclass(frozen=True)
class DukeHistogram:
    x_edges: tuple[float, ...]
    y_edges: tuple[float, ...]  # last band [y_edges[-1], inf)
    empirical: np.ndarray       # shape (nx, ny+1)
    expected: np.ndarray
    total: int

    def per_cell_rel_dev(self) -> np.ndarray:
        return (self.empirical - self.expected) / np.maximum(self.expected, 1e-300)


def cell_measure(x0: float, x1: float, y0: float, y1: float) -> float:
    """mu of the rectangle [x0,x1] x [y0,y1] intersected with the fundamental
    domain; y1 = inf allowed.  Uses int dx/sqrt(1-x^2) = arcsin(x)."""
    x0, x1 = max(x0, -0.5), min(x1, 0.5)
    if x1 <= x0 or y1 <= y0:
        return 0.0
    inv_y1 = 0.0 if math.isinf(y1) else 1.0 / y1
    cuts = {x0, x1}
    for yy in (y0, y1):
        if yy < 1.0:
            xc = math.sqrt(1 - yy * yy)
            for s in (-xc, xc):
                if x0 < s < x1:
                    cuts.add(s)
    xs = sorted(cuts)
    tot = 0.0
    for u, v in zip(xs, xs[1:]):
        mid = (u + v) / 2
        g = math.sqrt(max(1 - mid * mid, 0.0))
        if g >= y1:       # domain floor above the cell: empty strip
            continue
        if g > y0:        # floor inside the cell: arc-bounded strip
            tot += math.asin(v) - math.asin(u) - (v - u) * inv_y1
        else:             # flat strip
            tot += (v - u) * (1.0 / y0 - inv_y1)
    return 3 / math.pi * tot


def duke_histogram(d_min: int, d_max: int, grid: GridSpec | str) -> DukeHistogram:
    """Bin every Heegner point of every fundamental D in [d_min, d_max] into
    the grid and attach the exact expected cell masses."""
    if isinstance(grid, str):
        grid = GridSpec.parse(grid)
    if d_max >= 0 or d_min > d_max:
        raise ValueError("need d_min <= d_max < 0")
    a, b, c, D = bulk.sweep_reduced_forms(-d_max, -d_min)
    if len(D) == 0:
        raise ValueError("range contains no fundamental discriminant")
    x = -b / (2 * a)
    y = np.sqrt((-D).astype(float)) / (2 * a)

    x_edges = np.linspace(-0.5, 0.5, grid.nx + 1)
    ratio = (grid.y_cap / Y_MIN) ** (1.0 / grid.ny)
    y_edges = Y_MIN * ratio ** np.arange(grid.ny + 1)
    y_edges[0] = Y_MIN

    ix = np.clip(np.searchsorted(x_edges, x, side="right") - 1, 0, grid.nx - 1)
    iy = np.clip(np.searchsorted(y_edges, y, side="right") - 1, 0, grid.ny)  # ny = top band
    emp = np.zeros((grid.nx, grid.ny + 1), dtype=np.int64)
    np.add.at(emp, (ix, iy), 1)

    exp = np.zeros_like(emp, dtype=np.float64)
    for i in range(grid.nx):
        for j in range(grid.ny + 1):
            ylo = y_edges[j] if j < grid.ny else y_edges[-1]
            yhi = y_edges[j + 1] if j < grid.ny else math.inf
            exp[i, j] = cell_measure(x_edges[i], x_edges[i + 1], ylo, yhi)
    total = len(D)
    return DukeHistogram(
        x_edges=tuple(float(v) for v in x_edges),
        y_edges=tuple(float(v) for v in y_edges),
        empirical=emp,
        expected=exp * total,
        total=total,
    )


def mean_abs_deviation(hist: DukeHistogram) -> float:
    """Average |empirical - expected| / total over cells with positive mass."""
    mask = hist.expected > 0
    return float(
        np.mean(np.abs(hist.empirical[mask] - hist.expected[mask])) / hist.total
    )
