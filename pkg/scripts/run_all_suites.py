#!/usr/bin/env python3
"""Run every verification suite and print a one-line summary per suite.

Writes per-suite CSV reports next to this script when --out-dir is given.
"""

import argparse
import pathlib
import sys
import time

from anncalc.verification import SUITES, run_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--out-dir", default=None, help="directory for CSV reports")
    args = parser.parse_args()

    failures = 0
    for name in SUITES:
        t0 = time.perf_counter()
        report = run_suite(name, args.seed)
        elapsed = time.perf_counter() - t0
        bad = report.failures()
        failures += len(bad)
        print(f"{name:10s} {len(report.entries):4d} checks "
              f"{len(bad):2d} failures {elapsed:6.2f}s")
        for entry in bad:
            print(f"  FAIL {entry.name}: measured={entry.measured!r} bound={entry.bound!r}")
        if args.out_dir:
            out = pathlib.Path(args.out_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{name}_seed{args.seed}.csv").write_text(report.to_csv())
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
