#!/usr/bin/env python3
"""Survey torsion growth over random small curves.

Draws random integral models over Q(i) and Q(sqrt(-3)), runs the growth
scan on each, and tabulates (E(K)_tor -> E(L)_tor) transitions with the
number of extensions realizing them.

Usage: python scripts/growth_survey.py [--count N] [--seed S] [--prune]
"""

import argparse
import collections
import pathlib
import random
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from torsiongrowth.curves import SingularCurveError, curve_from_long
from torsiongrowth.fields import QI, QSQRT_MINUS3
from torsiongrowth.growth import allowed_growth, growth_extensions
from torsiongrowth.torsion import torsion_over_quad


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--count", type=int, default=50, help="curves per field")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--prune", action="store_true",
                    help="skip provably useless division polynomials")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    transitions = collections.Counter()
    verdicts = collections.Counter()
    t0 = time.time()
    for K in (QI, QSQRT_MINUS3):
        scanned = 0
        while scanned < args.count:
            coeffs = [rng.choice([0, 1]), rng.randint(-1, 1), rng.choice([0, 1]),
                      rng.randint(-10, 10), rng.randint(-10, 10)]
            try:
                E = curve_from_long(K, coeffs)
            except SingularCurveError:
                continue
            scanned += 1
            T = torsion_over_quad(E)
            for rec in growth_extensions(E, prune=args.prune):
                transitions[(K.D, T.label(), rec.group.label())] += 1
                verdicts[allowed_growth(K, T, rec.group)] += 1
    dt = time.time() - t0
    print(f"scanned {2 * args.count} curves in {dt:.1f}s\n")
    print(f"{'D':>4}  {'E(K)_tor':<10} {'E(L)_tor':<10} {'count':>5}")
    for (D, frm, to), n in sorted(transitions.items()):
        print(f"{D:>4}  {frm:<10} {to:<10} {n:>5}")
    print("\nverdicts:", dict(verdicts))
    return 0


if __name__ == "__main__":
    sys.exit(main())
