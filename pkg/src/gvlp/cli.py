"""Command-line entry point: ``gvlp <subcommand> [--config c.json] [--out r.json] ...``.

Exit status is 0 iff every asserted verdict in the report passed.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace

from .exponents import from_spec
from .harness import experiments as ex
from .harness.config import ExperimentConfig
from .harness.report import emit_report

COMMANDS = {
    "check-exponent": lambda cfg: ex.exponent_checks(from_spec(cfg.exponent, cfg.dim), cfg),
    "norms": ex.norms_experiment,
    "semigroup": ex.semigroup_experiment,
    "covering": ex.covering_experiment,
    "boundedness": ex.run_boundedness_experiment,
    "continuity": ex.continuity_experiment,
    "verify-all": ex.verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gvlp", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", help="JSON file matching ExperimentConfig (defaults apply when absent)")
    parser.add_argument("--out", help="report path (default: the config's output field)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--seed", type=int, help="overrides the config seed")
    parser.add_argument("--refine", action="store_true", help="double every quadrature order")
    parser.add_argument("--quiet", action="store_true", help="suppress the per-verdict summary")
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise SystemExit("--seed must be an unsigned 64-bit integer")
        cfg = replace(cfg, seed=args.seed)
    if args.refine:
        cfg = cfg.refined()
    return cfg


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = load_config(args)
    t0 = time.perf_counter()
    report = COMMANDS[args.command](cfg)
    out = args.out or cfg.output
    emit_report(report, out, args.format)
    if not args.quiet:
        for line in report.summary_lines():
            print(line)
        print(f"{args.command}: {'PASS' if report.passed else 'FAIL'} in {time.perf_counter() - t0:.1f}s -> {out}")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
