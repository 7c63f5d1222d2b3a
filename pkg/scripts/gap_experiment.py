"""Minimum tile count with weight bound 3 against the budget p_F.

Satisfiable formulas reach p_F exactly; unsatisfiable ones need p_F + 1,
so the best weight achievable with p_F tiles is at least 4.

    python3 scripts/gap_experiment.py --sat 10 --seed 3
"""

import argparse
import sys
import time

from rtile.corpus import random_corpus, unsat_planar
from rtile.formula import sat_oracle
from rtile.reduction import reduce
from rtile.solver import structured_min_tiles


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sat", type=int, default=10, help="random formulas (<= 4 vars, <= 3 clauses)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    formulas = random_corpus(args.sat, 4, 3, args.seed) + unsat_planar()
    print(f"{'vars':>4} {'cl':>3} {'sat':>5} {'side':>5} {'p_F':>7} {'min':>7} {'W*@p_F':>7} {'sec':>6}")
    wrong = 0
    for f in formulas:
        t0 = time.perf_counter()
        inst, _ = reduce(f)
        m = len(structured_min_tiles(inst.weights, 3))
        sat = sat_oracle(f) is not None
        wrong += (m == inst.p) != sat
        bound = "3" if m <= inst.p else ">=4"
        print(f"{f.var_count:>4} {f.k:>3} {str(sat):>5} {inst.side:>5} {inst.p:>7} {m:>7} "
              f"{bound:>7} {time.perf_counter() - t0:>6.2f}")
    return 1 if wrong else 0


if __name__ == "__main__":
    sys.exit(main())
