"""plotview command line: render experiment outputs to a figure file.

Usage: plotview <reconstruction.csv> <report.json> --out fig.png
       [--estimators a,b,c] [--format png|svg]
"""

import argparse
import sys

from .render import MissingColumnError, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotview",
        description="Render reconstruction experiment outputs as figure panels.")
    parser.add_argument("csv", help="reconstruction.csv from the experiment CLI")
    parser.add_argument("report", help="report.json from the experiment CLI")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--estimators", default=None,
                        help="comma-separated estimator subset (default: all)")
    parser.add_argument("--format", default=None, choices=("png", "svg"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    estimators = None
    if args.estimators is not None:
        estimators = tuple(n for n in args.estimators.split(",") if n)
    spec = PlotSpec(csv_path=args.csv, report_path=args.report, out_path=args.out,
                    estimators=estimators, image_format=args.format)
    try:
        render(spec)
    except (MissingColumnError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
