"""Run every experiment with a config file and print the verdicts.

    python scripts/run_verify_all.py [configs/default.json] [--out report.json]
"""
import argparse
import sys
import time

from gvlp.harness import ExperimentConfig, emit_report
from gvlp.harness.experiments import verify_all


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("config", nargs="?")
    ap.add_argument("--out", default="verify_all.json")
    args = ap.parse_args()
    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig()
    t0 = time.perf_counter()
    rep = verify_all(cfg)
    emit_report(rep, args.out)
    for line in rep.summary_lines():
        print(line)
    print(f"{len(rep.failures())} failing verdicts, {time.perf_counter() - t0:.1f}s, config {cfg.hash()}")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
