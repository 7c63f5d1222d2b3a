"""Reduce one formula, tile it from a satisfying assignment and draw both.

    python3 scripts/render_demo.py --out-dir demo
"""

import argparse
from pathlib import Path

from rtile.formula import Cnf, parse_dimacs, sat_oracle
from rtile.reduction import assignment_to_tiling, reduce
from rtile.render import render_ascii, render_svg


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cnf", help="DIMACS file (default: a single clause x1 v -x2 v x3)")
    ap.add_argument("--out-dir", default="demo")
    args = ap.parse_args()

    if args.cnf:
        f = parse_dimacs(Path(args.cnf).read_text())
    else:
        f = Cnf.from_lists(3, [[1, -2, 3]])
    inst, cert = reduce(f)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "instance.txt").write_text(render_ascii(inst.weights))
    a = sat_oracle(f)
    tiling = assignment_to_tiling(cert, a) if a is not None else None
    if tiling is not None:
        (out / "tiling.txt").write_text(render_ascii(inst.weights, tiling))
    (out / "tiling.svg").write_text(render_svg(inst.weights, tiling))
    (out / "certificate.txt").write_text(cert.text())
    print(f"side {inst.side}, p_F {inst.p}, files in {out}/")


if __name__ == "__main__":
    main()
