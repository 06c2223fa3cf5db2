"""Command-line entry point: figures <run-dir> [--format svg|png] [--only ...]."""

from __future__ import annotations

import argparse
import sys

from .data import SchemaError
from .figures import FIGURE_IDS, render_all


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render figure analogues from a normsim matrix directory.",
    )
    parser.add_argument("run_dir", metavar="RUN_DIR", help="directory written by `normsim matrix`")
    parser.add_argument("--format", choices=("svg", "png"), default="svg", dest="fmt")
    parser.add_argument(
        "--only",
        metavar="IDS",
        help=f"comma-separated subset of {','.join(FIGURE_IDS)}",
    )
    parser.add_argument("--log", action="store_true", help="log x-axis on power-law panels")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    only = [fid.strip() for fid in args.only.split(",")] if args.only else None
    try:
        paths = render_all(args.run_dir, fmt=args.fmt, only=only, log=args.log)
    except SchemaError as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"figures: {exc}", file=sys.stderr)
        return 1
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
