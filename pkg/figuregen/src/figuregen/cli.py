"""figuregen --csv <path> --which fig1|fig2 --out <path> [--dmin --dmax]"""

from __future__ import annotations

import argparse
import sys

from .render import EmptySelectionError, PlotSpec, SchemaError, render


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="figuregen")
    p.add_argument("--csv", required=True, help="scan CSV produced by the survey tool")
    p.add_argument("--which", required=True, choices=("fig1", "fig2"))
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--dmin", type=int, default=None)
    p.add_argument("--dmax", type=int, default=None)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    d_range = None
    if (args.dmin is None) != (args.dmax is None):
        print("error: --dmin and --dmax must be given together", file=sys.stderr)
        return 1
    if args.dmin is not None:
        d_range = (args.dmin, args.dmax)
    spec = PlotSpec(input_csv=args.csv, which=args.which, out_image=args.out, d_range=d_range)
    try:
        out = render(spec)
    except (SchemaError, EmptySelectionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
