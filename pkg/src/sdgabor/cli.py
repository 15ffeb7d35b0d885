"""Command line: verify | analyze | synthesize | oracle-compare.

Exit status: 0 pass, 1 check failure, 2 usage or config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import harness
from .io import FieldFormatError, LatticeIncompleteError, ParseError
from .transforms import DegenerateWindowSliceError, KindMismatchError

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("sdgabor")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        val = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} is not a number") from None
    return name, val


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, type=Path, help="JSON config file")
    common.add_argument("--out", type=Path, help="output directory (default: config 'output')")
    common.add_argument("--mode", choices=("oracle", "interp"), help="evaluation mode for moved points")
    common.add_argument("--tol", action="append", type=_tol, default=[], metavar="NAME=VALUE",
                        help="override a tolerance (repeatable)")
    common.add_argument("--seed", type=int, help="seed for random test data")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="sdgabor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("verify", parents=[common], help="run the invariant suite, write report.json")
    sub.add_parser("analyze", parents=[common], help="write the transform field and magnitude slices")
    s = sub.add_parser("synthesize", parents=[common], help="reconstruct a signal from a field file")
    s.add_argument("field", type=Path, help="GTF1 field file")
    sub.add_parser("oracle-compare", parents=[common], help="compare fast paths with reference oracles")
    return p


def _load(args) -> harness.Config:
    cfg = harness.Config.load(args.config)
    if args.mode:
        cfg.mode = args.mode
    if args.seed is not None:
        cfg.seed = args.seed
    for name, val in args.tol:
        cfg.tolerances[name] = val
    cfg.validate()
    return cfg


def _emit_report(report: harness.VerificationReport, out: Path) -> int:
    path = harness.write_report(report, out)
    for c in report.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.check_name} = {c.value}")
    print(f"report: {path}")
    return EXIT_PASS if report.overall_pass else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = _load(args)
        out = args.out or cfg.resolve(cfg.output)
        if args.command == "verify":
            return _emit_report(harness.run_verify(cfg), out)
        if args.command == "oracle-compare":
            return _emit_report(harness.run_oracle_compare(cfg), out)
        if args.command == "analyze":
            meta = harness.run_analyze(cfg, out)
            print(json.dumps(meta, indent=2, sort_keys=True))
            return EXIT_PASS
        path = harness.run_synthesize(cfg, args.field, out)
        print(f"reconstruction: {path}")
        return EXIT_PASS
    except (OSError, FieldFormatError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (harness.ConfigError, ParseError, LatticeIncompleteError, KindMismatchError,
            DegenerateWindowSliceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
