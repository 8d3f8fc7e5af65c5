"""Command line entry point.

    pitwave <mode> --config <path> --out <dir> [--workers N]

with modes fine-seq, coarse-seq, parareal, kse and estimate, plus
``pitwave compare --a <dir> --b <dir>`` for run-to-run error reports.
Exit codes: 0 success, 2 configuration error, 3 numerical blow-up.
"""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .runner import EXIT_CONFIG, MODES, compare_runs, run_experiment, write_comparison


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pitwave",
                                     description="Parallel-in-time advection / acoustic-advection runs")
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=f"run the {mode} experiment mode")
        p.add_argument("--config", required=True, help="key=value config file")
        p.add_argument("--out", default=None, help="output directory (default: config out_dir)")
        p.add_argument("--workers", type=int, default=None,
                       help="fine-predictor worker count (overrides PIT_WORKERS and config)")
    cmp_p = sub.add_parser("compare", help="relative l2 error between two runs' field snapshots")
    cmp_p.add_argument("--a", required=True, help="first run directory")
    cmp_p.add_argument("--b", required=True, help="second (reference) run directory")
    cmp_p.add_argument("--out", default=None, help="optional CSV path for the error report")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.mode == "compare":
            rows = compare_runs(args.a, args.b)
            for t, err in rows:
                print(f"t={t:.6f}  rel_l2_error={err:.6e}")
            if args.out:
                write_comparison(args.out, rows)
            return 0
        cfg = load_config(args.config)
        return run_experiment(cfg, args.mode, out_dir=args.out, workers=args.workers)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
