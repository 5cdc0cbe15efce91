"""CLI: render one figure from experiment CSV files.

    plot --figure power --in results/power_sweep_results.csv --out power.png
    plot --figure layout --in fixtures/layout.csv --out layout.png
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FIGURE_IDS, FigureSpec, SchemaError, render_figure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render experiment CSVs as figures"
    )
    parser.add_argument("--figure", required=True, choices=FIGURE_IDS)
    parser.add_argument(
        "--in", dest="inputs", required=True, nargs="+", help="input CSV file(s)"
    )
    parser.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        figure_id=args.figure,
        inputs=tuple(Path(p) for p in args.inputs),
        output=Path(args.out),
    )
    try:
        path = render_figure(spec)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
