"""Command-line entry point: ``roughbee run|verify|encode``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bench import ConfigError, emit_report, load_config, run_experiment, verify_against_oracle
from .data import DataError, DiscretizationSpec, dump_encoded, load_table


def _parse_spec(text: str) -> DiscretizationSpec:
    """``none``, ``equal_width:5``, ``equal_frequency`` (3 bins) ..."""
    strategy, _, bins = text.partition(":")
    try:
        return DiscretizationSpec(strategy, int(bins) if bins else 3)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _write(text: str, out: Optional[Path]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="roughbee",
                                     description="Rough-set reduct search experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("run", "run an experiment config"),
                            ("verify", "compare reduct sizes against the exhaustive oracle")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", type=Path)
        p.add_argument("--seed", type=int, help="override every algorithm's base_seed")
        p.add_argument("--out", type=Path, help="write the report here instead of stdout")
        if name == "run":
            p.add_argument("--format", choices=("table", "machine"))
            p.add_argument("--timing", action="store_true", help="include wall time")
        else:
            p.add_argument("--cap", type=int, default=24, help="max attributes for the oracle")

    p = sub.add_parser("encode", help="dump a dataset as the integer-coded decision table")
    p.add_argument("dataset", type=Path)
    p.add_argument("spec", nargs="?", type=_parse_spec, default=DiscretizationSpec(),
                   help="STRATEGY[:BINS], default equal_frequency:3")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--no-header", action="store_true")
    p.add_argument("--missing-marker", default="?")
    p.add_argument("--missing-policy", choices=("drop_rows", "reject"), default="drop_rows")
    p.add_argument("--decision-column", type=int, default=-1)
    p.add_argument("--drop-column", type=int, action="append", default=[],
                   help="file column to ignore (repeatable)")
    p.add_argument("--out", type=Path)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "encode":
            table = load_table(args.dataset, args.spec, args.missing_policy,
                               delimiter=args.delimiter, has_header=not args.no_header,
                               missing_marker=args.missing_marker,
                               decision_column=args.decision_column,
                               drop_columns=args.drop_column)
            _write(dump_encoded(table), args.out)
            return 0
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
        if args.command == "verify":
            report = verify_against_oracle(cfg, args.cap)
            _write(report.render(), args.out)
            return 0 if report.ok else 1
        progress = (lambda msg: print(msg, file=sys.stderr)) if args.verbose else None
        rows = run_experiment(cfg, progress)
        text = emit_report(rows, args.format or cfg.format, timing=args.timing)
        _write(text, args.out or cfg.report_path)
        return 0
    except (ConfigError, DataError, OSError) as exc:
        print(f"roughbee: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
