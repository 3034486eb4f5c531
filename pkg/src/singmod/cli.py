"""Command-line front end.

Subcommands: scan, classgroup, jheight, lfunc, klf-check, constants, duke,
pi-props.  Exit codes: 0 on success, 2 when a scan wrote error rows, 1 on
usage errors.  SM_THREADS sets the worker count for scans.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constants as const_mod
from .precision import PrecisionContext
from .heights import height_j, height_j_approx
from .lfunctions import (
    EULER,
    L_one,
    L_prime_over_L_klf,
    L_prime_over_L_series,
    kronecker_limits,
)
from .quadforms import Discriminant, heegner_points, reduced_forms
from .survey import duke_histogram, scan, summarize, write_csv
from .zerosregion import golden_sweep, perturbation_sweep


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors must exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _disc(value: str) -> Discriminant:
    try:
        return Discriminant(int(value))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="singmod")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("scan", help="bulk discriminant scan to CSV")
    s.add_argument("--dmin", type=int, required=True)
    s.add_argument("--dmax", type=int, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--validate-fraction", type=float, default=0.0)
    s.add_argument("--precision", type=int, default=15)
    s.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("classgroup", help="reduced forms and Heegner points of D")
    g.add_argument("-D", type=_disc, required=True)

    j = sub.add_parser("jheight", help="height of j at the CM points of D")
    j.add_argument("-D", type=_disc, required=True)

    lf = sub.add_parser("lfunc", help="L(1,chi_D) and L'/L(1,chi_D)")
    lf.add_argument("-D", type=_disc, required=True)

    kc = sub.add_parser("klf-check", help="Kronecker-limit route vs series route")
    kc.add_argument("-D", type=_disc, required=True)

    sub.add_parser("constants", help="the explicit constants kappa1..3, C, varkappa")

    dk = sub.add_parser("duke", help="equidistribution histogram over the fundamental domain")
    dk.add_argument("--dmin", type=int, required=True)
    dk.add_argument("--dmax", type=int, required=True)
    dk.add_argument("--grid", default="8x6x4.0")
    dk.add_argument("--out", required=True)

    pp = sub.add_parser("pi-props", help="pairing-up inequality sweeps")
    pp.add_argument("--samples", type=int, default=100_000)
    pp.add_argument("--seed", type=int, default=1)
    return p


def _cmd_scan(args) -> int:
    records = scan(
        args.dmin, args.dmax, ctx=PrecisionContext(dps=args.precision),
        validate_fraction=args.validate_fraction, seed=args.seed,
    )
    write_csv(records, args.out)
    table = summarize(records)
    for k, v in table.items():
        print(f"{k:>24}: {v}")
    return 2 if table["errors"] else 0


def _cmd_classgroup(args) -> int:
    cd = reduced_forms(args.D)
    print(f"D = {cd.disc.value}  h = {cd.h}  w = {cd.w}")
    for f, pt in zip(cd.forms, heegner_points(cd)):
        tag = "  principal" if f.is_principal else ""
        print(f"  ({f.a}, {f.b}, {f.c})  tau = {pt.tau.real:+.6f} + {pt.tau.imag:.6f}i{tag}")
    return 0


def _cmd_jheight(args) -> int:
    cd = reduced_forms(args.D)
    print(f"ht(j(tau_D))        = {height_j(args.D, cd):.12f}")
    print(f"(1/h) sum pi√|D|/a  = {height_j_approx(args.D, cd):.12f}")
    return 0


def _cmd_lfunc(args) -> int:
    cd = reduced_forms(args.D)
    klf = L_prime_over_L_klf(args.D, cd)
    print(f"L(1,chi_D)  (series) = {L_one(args.D):.12f}")
    print(f"L(1,chi_D)  (class#) = {klf.L1:.12f}")
    series = L_prime_over_L_series(args.D)
    print(f"L'/L(1)  series      = {series.Lprime_over_L:.12f}  (err<{series.err_estimate:.1e})")
    print(f"L'/L(1)  klf         = {klf.Lprime_over_L:.12f}  (err<{klf.err_estimate:.1e})")
    print(f"route gap            = {abs(series.Lprime_over_L - klf.Lprime_over_L):.3e}")
    return 0


def _cmd_klf_check(args) -> int:
    cd = reduced_forms(args.D)
    kls = kronecker_limits(cd)
    for lim in kls.limits:
        print(f"  K(A) = {lim:+.12f}")
    print(f"gamma_K              = {kls.gamma_K:.12f}")
    klf = L_prime_over_L_klf(args.D, cd)
    print(f"gamma + L'/L - gamma_K = {EULER + klf.Lprime_over_L - kls.gamma_K:.3e}")
    series = L_prime_over_L_series(args.D)
    print(f"series-route gap       = {abs(series.Lprime_over_L - klf.Lprime_over_L):.3e}")
    return 0


def _cmd_constants(args) -> int:
    rep = const_mod.constant_C()
    print(f"  kappa1   = {rep.kappa1: .12f}")
    print(f"  kappa2   = {rep.kappa2: .12f}")
    print(f"  kappa3   = {rep.kappa3: .12f}")
    print(f"  C        = {rep.C: .12f}")
    print(f"  varkappa = {rep.varkappa: .12f}")
    print(json.dumps({
        "kappa1": rep.kappa1, "kappa2": rep.kappa2, "kappa3": rep.kappa3,
        "C": rep.C, "varkappa": rep.varkappa, "err_bounds": rep.err_bounds,
    }))
    return 0


def _cmd_duke(args) -> int:
    hist = duke_histogram(args.dmin, args.dmax, args.grid)
    import csv as _csv

    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = _csv.writer(fh)
        w.writerow(["x0", "x1", "y0", "y1", "expected", "empirical", "rel_dev"])
        dev = hist.per_cell_rel_dev()
        nx, nyp = hist.empirical.shape
        for i in range(nx):
            for jj in range(nyp):
                ylo = hist.y_edges[jj] if jj < nyp - 1 else hist.y_edges[-1]
                yhi = hist.y_edges[jj + 1] if jj < nyp - 1 else float("inf")
                w.writerow([
                    hist.x_edges[i], hist.x_edges[i + 1], ylo, yhi,
                    hist.expected[i, jj], int(hist.empirical[i, jj]), dev[i, jj],
                ])
    print(f"{hist.total} Heegner points over {nx * nyp} cells -> {args.out}")
    return 0


def _cmd_pi_props(args) -> int:
    g = golden_sweep(args.samples, args.seed)
    pturb = perturbation_sweep(args.samples, args.seed + 1)
    print(f"golden sweep:       {g['violations']} violations, min margin {g['min_margin']:.6f}")
    print(f"perturbation sweep: {pturb['violations']} violations, min margin {pturb['min_margin']:.6f}")
    return 0 if g["violations"] == 0 and pturb["violations"] == 0 else 2


_DISPATCH = {
    "scan": _cmd_scan,
    "classgroup": _cmd_classgroup,
    "jheight": _cmd_jheight,
    "lfunc": _cmd_lfunc,
    "klf-check": _cmd_klf_check,
    "constants": _cmd_constants,
    "duke": _cmd_duke,
    "pi-props": _cmd_pi_props,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
