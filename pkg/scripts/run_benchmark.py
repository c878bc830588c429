#!/usr/bin/env python3
"""Run the full 512^2 benchmark (R = 4, 6, 8; VDAMP/FISTA/SURE-IT).

Usage:
    python3 scripts/run_benchmark.py [--quick] [--out DIR] [--seed N] [--threads N]

--quick switches to the small 128^2 smoke-test configuration.
"""

import argparse
import sys
from pathlib import Path

from csmri.cli import main as cli_main

HERE = Path(__file__).resolve().parent


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--quick", action="store_true",
                        help="run the small smoke-test config instead")
    parser.add_argument("--out", default=None, help="output directory override")
    parser.add_argument("--seed", type=int, default=None, help="master seed override")
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    config = HERE / ("quick_demo.yaml" if args.quick else "full_benchmark.yaml")
    argv = ["run", "--config", str(config), "--threads", str(args.threads)]
    if args.out:
        argv += ["--out", args.out]
    if args.seed is not None:
        argv += ["--seed", str(args.seed)]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
