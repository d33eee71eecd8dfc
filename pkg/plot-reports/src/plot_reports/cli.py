"""Command-line front end: plot --kind sweep --csv out.csv --out fig.png"""
from __future__ import annotations

import argparse
import sys

from .data import SchemaError
from .render import KINDS, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render benchmark CSV files as figures")
    parser.add_argument("--kind", choices=KINDS, required=True,
                        help="sweep: mean return per arm with std bands; "
                             "improvement: rules-over-plain return ratio")
    parser.add_argument("--csv", required=True, help="bench CSV input")
    parser.add_argument("--out", required=True,
                        help="output image; a vector .svg twin is written too")
    parser.add_argument("--title", help="figure title override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = PlotSpec(csv_path=args.csv, kind=args.kind, out_path=args.out,
                    title=args.title)
    try:
        written = render(spec)
    except (OSError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(f"wrote {path}")
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
