"""Command-line front end.

Exit codes: 0 success, 1 property refuted (untileable, unsatisfiable,
certificate failure, oracle disagreement), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .errors import RtileError, ScaleExceeded, TooLarge
from .formula import check_assignment, emit_dimacs, gen_planar_3sat, parse_dimacs, sat_oracle
from .gadgetry import builtin_gadget, certify_gadget
from .instance import format_instance, format_tiling, parse_instance, parse_tiling, validate_tiling
from .reduction import reduce, tiling_to_assignment, verify_reduction
from .render import render_ascii, render_svg
from .solver import exact_decide, exact_optimize, max_weight, structured_decide


@dataclass
class CommandOutcome:
    exit_code: int
    report: str


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


class InputError(Exception):
    pass


def cmd_reduce(cnf_path: str, out_path: str, cert_path: Optional[str] = None) -> CommandOutcome:
    f = parse_dimacs(_read(cnf_path))
    inst, cert = reduce(f)
    rep = verify_reduction(cert)
    _write(out_path, format_instance(inst))
    if cert_path:
        _write(cert_path, cert.text())
    lines = [f"side {inst.side}",
             f"p_F = {cert.loop_term} (loops) + {2 * cert.k} (2k) + {cert.three_count} (t) = {inst.p}"]
    if not rep.ok:
        lines += ["reduction check failed:"] + rep.violations
        return CommandOutcome(1, "\n".join(lines))
    return CommandOutcome(0, "\n".join(lines))


def _decide(inst, p: int, W: int, method: str):
    weights = inst.weights
    structured_ok = W == 3 and all(v in (1, 2, 3) for row in weights for v in row)
    if method == "structured" or (method == "auto" and structured_ok):
        return structured_decide(weights, p, W)
    return exact_decide(weights, p, W)


def cmd_solve(inst_path: str, decide: Optional[tuple[int, int]] = None,
              optimize: Optional[int] = None, out: Optional[str] = None,
              method: str = "auto") -> CommandOutcome:
    inst = parse_instance(_read(inst_path))
    if decide is not None:
        p, W = decide
        tiling = _decide(inst, p, W, method)
        if tiling is None:
            return CommandOutcome(1, f"untileable with {p} tiles of weight <= {W}")
        if out:
            _write(out, format_tiling(tiling))
        return CommandOutcome(0, f"tileable: {len(tiling)} tiles, max weight "
                                 f"{max_weight(inst.weights, tiling)}")
    assert optimize is not None
    best, tiling = exact_optimize(inst.weights, optimize)
    if out:
        _write(out, format_tiling(tiling))
    return CommandOutcome(0, f"W* = {best} with {len(tiling)} tiles")


def cmd_verify(inst_path: str, tiling_path: str, p: Optional[int] = None,
               W: Optional[int] = None) -> CommandOutcome:
    inst = parse_instance(_read(inst_path))
    tiling = parse_tiling(_read(tiling_path))
    rep = validate_tiling(inst.weights, tiling, inst.p if p is None else p,
                          inst.W if W is None else W)
    if rep.ok:
        return CommandOutcome(0, f"valid: {len(tiling)} tiles")
    return CommandOutcome(1, "\n".join(rep.violations))


def cmd_roundtrip(cnf_path: str) -> CommandOutcome:
    f = parse_dimacs(_read(cnf_path))
    a = sat_oracle(f)
    inst, cert = reduce(f)
    tiling = structured_decide(inst.weights, inst.p, 3)
    sat, tileable = a is not None, tiling is not None
    lines = [f"sat_oracle: {'sat' if sat else 'unsat'}",
             f"structured_decide (p_F = {inst.p}, W = 3): {'tileable' if tileable else 'untileable'}"]
    if sat != tileable:
        lines.append("sat ⇔ tileable: DISAGREE")
        return CommandOutcome(1, "\n".join(lines))
    if sat:
        b = tiling_to_assignment(cert, tiling)
        if not check_assignment(f, b):
            lines.append("extracted assignment falsifies the formula")
            return CommandOutcome(1, "\n".join(lines))
        bits = " ".join(str(v if b.values[v] else -v) for v in sorted(b.values))
        lines.append(f"extracted assignment: {bits}")
        lines.append("sat ⇔ tileable: agree")
    else:
        lines.append("unsat ⇔ untileable: agree")
    return CommandOutcome(0, "\n".join(lines))


def cmd_certify_gadget() -> CommandOutcome:
    rep = certify_gadget(builtin_gadget())
    return CommandOutcome(0 if rep.passed else 1, rep.text().rstrip("\n"))


def cmd_gen(var_count: int, clause_count: int, seed: int, out: str) -> CommandOutcome:
    try:
        f = gen_planar_3sat(var_count, clause_count, seed)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _write(out, emit_dimacs(f))
    return CommandOutcome(0, f"wrote {out}: {var_count} variables, {clause_count} clauses")


def cmd_render(inst_path: str, tiling_path: Optional[str], fmt: str, out: str) -> CommandOutcome:
    inst = parse_instance(_read(inst_path))
    tiling = None
    if tiling_path:
        tiling = parse_tiling(_read(tiling_path))
        for t in tiling:
            if t.r2 >= inst.side or t.c2 >= inst.side:
                raise InputError(f"tile {t.line()} does not fit a {inst.side}x{inst.side} instance")
    text = render_ascii(inst.weights, tiling) if fmt == "ascii" else render_svg(inst.weights, tiling)
    _write(out, text)
    return CommandOutcome(0, f"wrote {out}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rtile", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("reduce", help="formula to RTILE instance")
    s.add_argument("cnf")
    s.add_argument("-o", "--out", required=True)
    s.add_argument("--cert")

    s = sub.add_parser("solve", help="decide or optimize an instance")
    s.add_argument("instance")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--decide", nargs=2, type=int, metavar=("P", "W"))
    g.add_argument("--optimize", type=int, metavar="P")
    s.add_argument("--out")
    s.add_argument("--method", choices=("auto", "exact", "structured"), default="auto")

    s = sub.add_parser("verify", help="check a tiling against an instance")
    s.add_argument("instance")
    s.add_argument("tiling")
    s.add_argument("--p", type=int)
    s.add_argument("--W", type=int)

    s = sub.add_parser("roundtrip", help="satisfiable iff tileable, on one formula")
    s.add_argument("cnf")

    sub.add_parser("certify-gadget", help="exhaustive check of the clause gadget")

    s = sub.add_parser("gen", help="random planar 3-CNF")
    s.add_argument("--vars", type=int, required=True)
    s.add_argument("--clauses", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--out", required=True)

    s = sub.add_parser("render", help="draw an instance, optionally with a tiling")
    s.add_argument("instance")
    s.add_argument("--tiling")
    s.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    s.add_argument("-o", "--out", required=True)
    return ap


def dispatch(args: argparse.Namespace) -> CommandOutcome:
    if args.command == "reduce":
        return cmd_reduce(args.cnf, args.out, args.cert)
    if args.command == "solve":
        return cmd_solve(args.instance, tuple(args.decide) if args.decide else None,
                         args.optimize, args.out, args.method)
    if args.command == "verify":
        return cmd_verify(args.instance, args.tiling, args.p, args.W)
    if args.command == "roundtrip":
        return cmd_roundtrip(args.cnf)
    if args.command == "certify-gadget":
        return cmd_certify_gadget()
    if args.command == "gen":
        return cmd_gen(args.vars, args.clauses, args.seed, args.out)
    return cmd_render(args.instance, args.tiling, args.format, args.out)


def run(argv: Optional[Sequence[str]] = None) -> CommandOutcome:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandOutcome(2 if exc.code else 0, "")
    try:
        return dispatch(args)
    except (InputError, ValueError, RtileError) as exc:
        kind = type(exc).__name__
        if isinstance(exc, (ScaleExceeded, TooLarge)):
            kind = "scale limit"
        return CommandOutcome(2, f"error ({kind}): {exc}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    outcome = run(argv)
    if outcome.report:
        stream = sys.stderr if outcome.exit_code == 2 else sys.stdout
        print(outcome.report, file=stream)
    return outcome.exit_code


if __name__ == "__main__":
    sys.exit(main())
