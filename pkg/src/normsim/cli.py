"""Command-line entry point.

Subcommands:
  run           one (distribution, regime) scenario
  matrix        the 2 x 3 distribution-by-regime grid, optionally replicated
  figures-data  rebuild derived CSVs (histograms, fits, summaries) from a
                directory of raw traces, without rerunning the dynamics

Flags override config-file values, which override built-in defaults.  The
default output directory can also be set via the NORMSIM_OUT environment
variable (lowest precedence after the built-in default).
"""

from __future__ import annotations

import argparse
import os
import sys

from .dynamics import CalibrationError, NumericError
from .experiment import (
    DISTRIBUTIONS,
    REGIMES,
    ConfigError,
    make_config,
    read_config_file,
    regenerate_derived,
    run_matrix,
    run_scenario,
)
from .metrics import SUMMARY_COLUMNS

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normsim",
        description="Resource-sharing norm simulations with deterministic CSV output.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH", help="flat key = value config file")
        p.add_argument("--distribution", choices=DISTRIBUTIONS)
        p.add_argument("--seed", type=int, help="population sampling seed")
        p.add_argument("--graph-seed", type=int, dest="graph_seed", help="network generation seed")
        p.add_argument("--iterations", type=int, help="number of repetitions T")
        p.add_argument("--replicates", type=int, help="number of derived-seed repeats")
        p.add_argument("--out", metavar="DIR", help="output directory")

    p_run = sub.add_parser("run", help="run one scenario")
    add_common(p_run)
    p_run.add_argument("--regime", choices=REGIMES)

    p_matrix = sub.add_parser("matrix", help="run all six scenarios with calibrated charges")
    add_common(p_matrix)

    p_fig = sub.add_parser("figures-data", help="rebuild derived CSVs from raw traces")
    p_fig.add_argument("run_dir", metavar="DIR", help="directory written by run or matrix")

    return parser


def _flag_values(args: argparse.Namespace) -> dict:
    keys = ("distribution", "regime", "seed", "graph_seed", "iterations", "replicates", "out")
    values = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    if "out" not in values and os.environ.get("NORMSIM_OUT"):
        values["out"] = os.environ["NORMSIM_OUT"]
    return values


def _print_results(results) -> None:
    print(",".join(SUMMARY_COLUMNS))
    for result in results:
        print(",".join("" if cell is None else str(cell) for cell in result.row()))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figures-data":
            results = regenerate_derived(args.run_dir)
            _print_results(results)
            return 0
        file_values = read_config_file(args.config) if args.config else {}
        config = make_config(file_values, _flag_values(args))
        if args.command == "run":
            results = [run_scenario(config)]
        else:
            results = run_matrix(config)
        _print_results(results)
        return 0
    except ConfigError as exc:
        print(f"normsim: configuration error: {exc}", file=sys.stderr)
        return 2
    except (CalibrationError, NumericError) as exc:
        print(f"normsim: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"normsim: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
