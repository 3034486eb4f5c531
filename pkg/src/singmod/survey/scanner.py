"""Bulk discriminant scan: per-D records, CSV persistence, summary table.

The scan walks fundamental discriminants in fixed |D|-blocks.  Each block is
an independent pure computation (vectorized sweep + grouped reductions +
optional series-route validation), so blocks may run in worker processes; the
ordered merge makes the output identical for any worker count.  Per-record
failures become error rows rather than aborting a long run.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..constants import C_REFERENCE
from ..precision import DOUBLE, PrecisionContext
from ..quadforms import Discriminant, fundamental_range
from ..lfunctions import L_prime_over_L_series
from . import bulk

BLOCK = 8192          # |D|-width of one work unit
SERIES_CEILING = 5000  # the series route always runs below this modulus

CSV_COLUMNS = [
    "D", "h", "ht_j", "ht_j_approx", "L1", "LpL", "LpL_series",
    "gamma_K", "residual", "fig1_ratio", "hdbtt_factor", "route_gap", "status",
]


@dataclass(frozen=True)
class DiscriminantRecord:
    D: int
    h: int | None
    ht_j: float | None
    ht_j_approx: float | None
    L1: float | None
    LpL: float | None
    LpL_series: float | None
    gamma_K: float | None
    residual: float | None
    fig1_ratio: float | None
    hdbtt_factor: float | None
    route_gap: float | None
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


class RecordError(ArithmeticError):
    """Per-record failure with a short machine-readable code."""

    def __init__(self, code: str):
        super().__init__(code)
        self.code = code


def _error_record(d: int, code: str) -> DiscriminantRecord:
    return DiscriminantRecord(
        D=d, h=None, ht_j=None, ht_j_approx=None, L1=None, LpL=None,
        LpL_series=None, gamma_K=None, residual=None, fig1_ratio=None,
        hdbtt_factor=None, route_gap=None, status=f"error:{code}",
    )


def _assemble_record(cols: dict, i: int, validate: bool, ctx: PrecisionContext) -> DiscriminantRecord:
    d = int(cols["D"][i])
    vals = {k: float(cols[k][i]) for k in (
        "ht_j", "ht_j_approx", "L1", "LpL", "gamma_K", "residual",
        "fig1_ratio", "hdbtt_factor",
    )}
    if not all(math.isfinite(v) for v in vals.values()):
        raise RecordError("nonfinite")
    lpl_series = route_gap = None
    if validate:
        series = L_prime_over_L_series(Discriminant(d), ctx)
        lpl_series = series.Lprime_over_L
        route_gap = abs(vals["LpL"] - lpl_series)
    return DiscriminantRecord(
        D=d, h=int(cols["h"][i]), LpL_series=lpl_series, route_gap=route_gap,
        status="ok", **vals,
    )


def _scan_block(args) -> list[DiscriminantRecord]:
    (lo_abs, hi_abs), validation, ctx = args
    cols = bulk.aggregate_window(lo_abs, hi_abs, C_REFERENCE)
    if len(cols["D"]) == 0:
        return []
    out = []
    for i in range(len(cols["D"])):
        d = int(cols["D"][i])
        try:
            out.append(_assemble_record(cols, i, validate=d in validation, ctx=ctx))
        except Exception as exc:  # error rows must never abort a bulk run
            code = getattr(exc, "code", type(exc).__name__.lower())
            out.append(_error_record(d, str(code)))
    return out


def scan(
    d_min: int,
    d_max: int,
    ctx: PrecisionContext = DOUBLE,
    validate_fraction: float = 0.0,
    seed: int = 0,
    threads: int | None = None,
) -> list[DiscriminantRecord]:
    """One record per fundamental D with d_min <= D <= d_max, ordered by
    descending |D|.

    The Kronecker-limit route provides L'/L; the Hurwitz series route is run
    for every |D| <= 5000 plus a seeded validate_fraction subsample, and the
    gap between the two is recorded.  The bulk path always runs in hardware
    doubles (all scan-level budgets are met there); ctx is forwarded to the
    per-D validation route.  The L1 column is the analytic
    class-number-formula value 2 pi h / (w sqrt(|D|)); the independent
    digamma-series L1 lives in the lfunctions module and in the validation
    columns.
    """
    if d_max >= 0 or d_min > d_max:
        raise ValueError("need d_min <= d_max < 0")
    if not 0 <= validate_fraction <= 1:
        raise ValueError("validate_fraction must be in [0, 1]")
    if threads is None:
        threads = int(os.environ.get("SM_THREADS", "1"))

    fund = fundamental_range(d_min, d_max)
    small = [d for d in fund if -d <= SERIES_CEILING]
    big = [d for d in fund if -d > SERIES_CEILING]
    rng = np.random.default_rng(seed)
    picks = rng.random(len(big)) < validate_fraction if big else []
    validation = frozenset(small) | {d for d, p in zip(big, picks) if p}

    lo_abs, hi_abs = -d_max, -d_min
    blocks = []
    top = hi_abs
    while top >= lo_abs:
        bot = max(lo_abs, top - BLOCK + 1)
        blocks.append(((bot, top), validation, ctx))
        top = bot - 1

    if threads > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_scan_block, blocks))
    else:
        results = [_scan_block(blk) for blk in blocks]
    return [rec for chunk in results for rec in chunk]


# -- CSV persistence -----------------------------------------------------------

def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, str)):
        return str(v)
    return repr(float(v))


def write_csv(records: list[DiscriminantRecord], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([_fmt(getattr(r, col)) for col in CSV_COLUMNS])


def read_csv(path: str) -> list[DiscriminantRecord]:
    def parse(col, s):
        if s == "":
            return None
        return int(s) if col in ("D", "h") else float(s)

    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        rd = csv.DictReader(fh)
        if rd.fieldnames != CSV_COLUMNS:
            raise ValueError("unexpected CSV schema")
        for row in rd:
            kw = {col: parse(col, row[col]) for col in CSV_COLUMNS if col != "status"}
            out.append(DiscriminantRecord(status=row["status"], **kw))
    return out


# -- summary -------------------------------------------------------------------

def summarize(records: list[DiscriminantRecord]) -> dict:
    """Percentile table over a scan: residual and figure statistics, the
    worst route gap, and the fraction of records with L'/L above C."""
    ok = [r for r in records if r.ok]
    if not ok:
        raise ValueError("no successful records to summarize")
    absres = np.array([abs(r.residual) for r in ok])
    ratio = np.array([r.fig1_ratio for r in ok])
    logD = np.log(np.array([-r.D for r in ok], dtype=float))
    hdev = np.abs(np.array([r.hdbtt_factor for r in ok]) - 1) * logD
    gaps = [r.route_gap for r in ok if r.route_gap is not None]
    lpl = np.array([r.LpL for r in ok])
    pct = lambda v, q: float(np.percentile(v, q))
    return {
        "records": len(records),
        "errors": len(records) - len(ok),
        "abs_residual_p50": pct(absres, 50),
        "abs_residual_p90": pct(absres, 90),
        "abs_residual_p99": pct(absres, 99),
        "fig1_ratio_p01": pct(ratio, 1),
        "fig1_ratio_p50": pct(ratio, 50),
        "fig1_ratio_p99": pct(ratio, 99),
        "hdbtt_dev_p50": pct(hdev, 50),
        "hdbtt_dev_max": float(hdev.max()),
        "route_gap_max": max(gaps) if gaps else None,
        "validated": len(gaps),
        "fraction_LpL_above_C": float(np.mean(lpl > C_REFERENCE)),
    }


def median_abs_residual(records: list[DiscriminantRecord], lo_abs: int, hi_abs: int) -> float:
    vals = [abs(r.residual) for r in records if r.ok and lo_abs <= -r.D <= hi_abs]
    if not vals:
        raise ValueError("window contains no records")
    return float(np.median(vals))
