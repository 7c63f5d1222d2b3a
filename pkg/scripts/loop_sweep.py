"""Reduce a batch of random planar formulas and tabulate loop statistics.

    python3 scripts/loop_sweep.py --count 50 --max-vars 8 --max-clauses 6 --seed 1
"""

import argparse
import csv
import sys
import time

from rtile.corpus import random_corpus
from rtile.reduction import reduce, verify_reduction


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-vars", type=int, default=8)
    ap.add_argument("--max-clauses", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = csv.writer(sys.stdout)
    out.writerow(["formula", "vars", "clauses", "side", "loops", "sum_Z", "sum_P", "t", "p_F",
                  "ok", "seconds"])
    failures = 0
    for i, f in enumerate(random_corpus(args.count, args.max_vars, args.max_clauses, args.seed)):
        t0 = time.perf_counter()
        inst, cert = reduce(f)
        ok = verify_reduction(cert).ok
        failures += not ok
        out.writerow([i, f.var_count, f.k, inst.side, len(cert.loop_lengths),
                      sum(cert.loop_lengths.values()), sum(cert.changers.values()),
                      cert.three_count, inst.p, int(ok), f"{time.perf_counter() - t0:.3f}"])
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
