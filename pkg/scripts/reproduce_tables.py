#!/usr/bin/env python3
"""Reproduce both published example tables and print a timing summary.

Usage: python scripts/reproduce_tables.py [--jobs N]
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

import json

from torsiongrowth.cli import check_rows, parse_field

TABLES = pathlib.Path(__file__).resolve().parent.parent / "tables"


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    failures = 0
    for name, tag in (("table6.json", "Qi"), ("table7.json", "Qsqrt-3")):
        rows = json.loads((TABLES / name).read_text())
        t0 = time.time()
        results = check_rows(rows, parse_field(tag), jobs=args.jobs)
        dt = time.time() - t0
        bad = [r for r in results if not r.ok]
        failures += len(bad)
        print(f"{name}: {len(results) - len(bad)}/{len(results)} rows verified "
              f"in {dt:.1f}s ({tag})")
        for r in bad:
            print(f"  FAIL row {r.index}: {r.message}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
