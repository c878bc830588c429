"""Command line entry point: plot --figure figN --run DIR --out FILE.png"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import SchemaError
from .figures import FIGURES, FigureSpec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot", description="Render figures from a completed run directory"
    )
    parser.add_argument("--figure", required=True, choices=sorted(FIGURES),
                        help="which figure layout to render")
    parser.add_argument("--run", required=True, type=Path,
                        help="run directory containing the CSV/binary outputs")
    parser.add_argument("--out", required=True, type=Path,
                        help="output image path (.png, .pdf, ...)")
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument("--log-x", action="store_true",
                        help="log-scale iteration axes where applicable")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if not args.run.is_dir():
        print(f"error: run directory {args.run} does not exist", file=sys.stderr)
        return 2
    spec = FigureSpec(args.figure, args.run, args.out, log_x=args.log_x,
                      options={"dpi": args.dpi})
    try:
        out = render(spec)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
