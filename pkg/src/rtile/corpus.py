"""Deterministic formula collections shared by tests and experiment scripts."""

from __future__ import annotations

from .errors import GenerationFailed
from .formula import Cnf, gen_planar_3sat, incidence_graph, is_planar


def random_corpus(count: int, max_vars: int, max_clauses: int, seed: int = 0,
                  min_vars: int = 3) -> list[Cnf]:
    """``count`` distinct planar formulas cycling over sizes up to the bounds."""
    sizes = [(n, k) for n in range(min_vars, max_vars + 1) for k in range(1, max_clauses + 1)]
    out, seen = [], set()
    s = seed
    stale = 0
    while len(out) < count:
        n, k = sizes[s % len(sizes)]
        s += 1
        try:
            f = gen_planar_3sat(n, k, s, retries=200)
        except GenerationFailed:
            stale += 1
        else:
            key = (f.var_count, tuple(c.literals for c in f.clauses))
            if key in seen:
                stale += 1
            else:
                seen.add(key)
                out.append(f)
                stale = 0
        if stale > 10 * len(sizes):
            raise GenerationFailed(f"only {len(out)} distinct formulas found")
    return out


def _resolution_pairs(pivots: list[tuple[int, bool, int, bool]], fresh: int) -> list[list[int]]:
    """Each (a, sa, b, sb) pivot becomes the two clauses (a, b, +z) and (a, b, -z)."""
    clauses = []
    for a, sa, b, sb in pivots:
        la, lb = (-a if sa else a), (-b if sb else b)
        clauses.append([la, lb, fresh])
        clauses.append([la, lb, -fresh])
        fresh += 1
    return clauses


def unsat_planar() -> list[Cnf]:
    """Hand-built unsatisfiable formulas with planar incidence graphs.

    Each pair (l1 | l2 | z), (l1 | l2 | -z) forces l1 | l2; the pivots are
    chosen so the forced 2-clauses are contradictory.
    """
    grid = [(1, False, 2, False), (1, False, 2, True), (1, True, 2, False), (1, True, 2, True)]
    chain = [(1, False, 2, False), (1, False, 2, True), (1, True, 3, False), (1, True, 3, True)]
    forms = [
        Cnf.from_lists(6, _resolution_pairs(grid, 3)),
        Cnf.from_lists(6, [list(reversed(c)) for c in _resolution_pairs(grid[::-1], 3)]),
        Cnf.from_lists(7, _resolution_pairs(chain, 4)),
        Cnf.from_lists(7, [[c[1], c[2], c[0]] for c in _resolution_pairs(chain[::-1], 4)]),
    ]
    for f in forms:
        assert is_planar(incidence_graph(f)).planar
    return forms


def sweep_corpus() -> list[Cnf]:
    return random_corpus(100, 8, 6, seed=0)


def equivalence_corpus() -> tuple[list[Cnf], list[Cnf]]:
    """Small satisfiable-or-not formulas (<= 4 variables, <= 3 clauses) and the
    planar unsatisfiable set."""
    return random_corpus(25, 4, 3, seed=1), unsat_planar()
