"""3CNF formulas: DIMACS I/O, clause-variable incidence graph, planarity, brute-force SAT."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

import networkx as nx

from .errors import (
    ClauseArity,
    DimacsSyntaxError,
    DuplicateVariable,
    GenerationFailed,
    IndexOutOfRange,
    TooLarge,
)

SAT_ORACLE_LIMIT = 24

Literal = tuple[int, bool]  # (variable index, negated)


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, Literal, Literal]

    def __post_init__(self):
        if len(self.literals) != 3:
            raise ClauseArity(f"clause has {len(self.literals)} literals, expected 3")
        vars_ = [v for v, _ in self.literals]
        if len(set(vars_)) != 3:
            raise DuplicateVariable(f"clause repeats a variable: {vars_}")

    @property
    def variables(self) -> tuple[int, int, int]:
        return tuple(v for v, _ in self.literals)

    def negated(self, var: int) -> bool:
        for v, neg in self.literals:
            if v == var:
                return neg
        raise KeyError(var)

    def satisfied_by(self, values: dict[int, bool]) -> bool:
        return any(values[v] != neg for v, neg in self.literals)

    def dimacs(self) -> str:
        return " ".join(str(-v if neg else v) for v, neg in self.literals) + " 0"


@dataclass(frozen=True)
class Cnf:
    var_count: int
    clauses: tuple[Clause, ...] = ()

    def __post_init__(self):
        if self.var_count < 0:
            raise IndexOutOfRange("negative variable count")
        for clause in self.clauses:
            for v in clause.variables:
                if not 1 <= v <= self.var_count:
                    raise IndexOutOfRange(f"variable {v} outside [1, {self.var_count}]")

    @classmethod
    def from_lists(cls, var_count: int, clauses: Iterable[Iterable[int]]) -> "Cnf":
        """Build from signed-integer clauses, e.g. ``[[1, -2, 3]]``."""
        out = []
        for lits in clauses:
            lits = list(lits)
            if len(lits) != 3:
                raise ClauseArity(f"clause {lits} has {len(lits)} literals")
            out.append(Clause(tuple((abs(x), x < 0) for x in lits)))
        return cls(var_count, tuple(out))

    @property
    def k(self) -> int:
        return len(self.clauses)

    def occurrences(self, var: int) -> list[int]:
        """Indices of clauses mentioning ``var``."""
        return [j for j, c in enumerate(self.clauses) if var in c.variables]


@dataclass(frozen=True)
class Assignment:
    values: dict[int, bool] = field(default_factory=dict)

    def __getitem__(self, var: int) -> bool:
        return self.values[var]


def check_assignment(f: Cnf, a: Assignment) -> bool:
    """Independent verifier: every clause has a literal made true by ``a``."""
    if set(a.values) != set(range(1, f.var_count + 1)):
        return False
    return all(c.satisfied_by(a.values) for c in f.clauses)


# -- DIMACS ----------------------------------------------------------------

def parse_dimacs(text: str) -> Cnf:
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsSyntaxError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsSyntaxError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsSyntaxError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsSyntaxError(f"line {lineno}: negative counts in header")
            continue
        if header is None:
            raise DimacsSyntaxError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                tokens.append(int(tok))
            except ValueError:
                raise DimacsSyntaxError(f"line {lineno}: bad literal {tok!r}") from None
    if header is None:
        raise DimacsSyntaxError("missing 'p cnf' header")
    var_count, clause_count = header

    raw_clauses: list[list[int]] = []
    current: list[int] = []
    for lit in tokens:
        if lit == 0:
            raw_clauses.append(current)
            current = []
        else:
            current.append(lit)
    if current:
        raise DimacsSyntaxError("last clause is not 0-terminated")
    if len(raw_clauses) != clause_count:
        raise DimacsSyntaxError(f"header announces {clause_count} clauses, found {len(raw_clauses)}")

    clauses = []
    for lits in raw_clauses:
        if len(lits) != 3:
            raise ClauseArity(f"clause {lits} has {len(lits)} literals")
        for x in lits:
            if abs(x) > var_count:
                raise IndexOutOfRange(f"literal {x} exceeds variable count {var_count}")
        clauses.append(Clause(tuple((abs(x), x < 0) for x in lits)))
    return Cnf(var_count, tuple(clauses))


def emit_dimacs(f: Cnf) -> str:
    lines = [f"p cnf {f.var_count} {f.k}"]
    lines += [c.dimacs() for c in f.clauses]
    return "\n".join(lines) + "\n"


# -- incidence graph ---------------------------------------------------------

def var_node(i: int) -> tuple[str, int]:
    return ("x", i)


def clause_node(j: int) -> tuple[str, int]:
    return ("c", j)


@dataclass(frozen=True)
class IncidenceGraph:
    variables: tuple[tuple[str, int], ...]
    clauses: tuple[tuple[str, int], ...]
    edges: tuple[tuple[tuple[str, int], tuple[str, int]], ...]

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.variables, bipartite=0)
        g.add_nodes_from(self.clauses, bipartite=1)
        g.add_edges_from(self.edges)
        return g

    def degree(self, node) -> int:
        return sum(node in e for e in self.edges)


def incidence_graph(f: Cnf) -> IncidenceGraph:
    variables = tuple(var_node(i) for i in range(1, f.var_count + 1))
    clauses = tuple(clause_node(j) for j in range(f.k))
    edges = []
    seen = set()
    for j, c in enumerate(f.clauses):
        for v in c.variables:
            if (v, j) not in seen:
                seen.add((v, j))
                edges.append((var_node(v), clause_node(j)))
    return IncidenceGraph(variables, clauses, tuple(edges))


@dataclass
class PlanarityReport:
    planar: bool
    witness: Optional[nx.PlanarEmbedding] = None


def is_planar(g) -> PlanarityReport:
    """Planarity test; accepts an :class:`IncidenceGraph` or any networkx graph."""
    if isinstance(g, IncidenceGraph):
        g = g.to_networkx()
    planar, embedding = nx.check_planarity(g)
    return PlanarityReport(planar, embedding if planar else None)


# -- satisfiability ------------------------------------------------------------

def sat_oracle(f: Cnf, limit: int = SAT_ORACLE_LIMIT) -> Optional[Assignment]:
    """Exhaustive search; returns the lexicographically first model (x1 most
    significant, False before True) or None."""
    if f.var_count > limit:
        raise TooLarge(f"{f.var_count} variables exceed brute-force bound {limit}")
    n = f.var_count
    clause_masks = []
    for c in f.clauses:
        # bit i-1 set means x_i true; clause falsified iff every literal false
        must_true = sum(1 << (v - 1) for v, neg in c.literals if neg)
        must_false = sum(1 << (v - 1) for v, neg in c.literals if not neg)
        clause_masks.append((must_true, must_false))
    for bits in itertools.product((False, True), repeat=n):
        word = sum(1 << i for i, b in enumerate(bits) if b)
        if all(not ((word & t) == t and (word & fl) == 0) for t, fl in clause_masks):
            return Assignment({i + 1: b for i, b in enumerate(bits)})
    return None


# -- generation --------------------------------------------------------------

def gen_planar_3sat(var_count: int, clause_count: int, seed: int, retries: int = 2000) -> Cnf:
    """Random 3CNF whose incidence graph is planar (generate-and-filter).

    When there are enough literal slots (3k >= n) every variable is made to
    occur at least once.
    """
    if var_count < 1 or var_count > 12:
        raise ValueError("var_count must be in [1, 12]")
    if clause_count < 0:
        raise ValueError("clause_count must be non-negative")
    if clause_count and var_count < 3:
        raise ValueError("clauses need at least 3 variables")
    rng = random.Random(seed)
    cover_all = 3 * clause_count >= var_count
    for _ in range(retries):
        clauses = []
        for _ in range(clause_count):
            vs = rng.sample(range(1, var_count + 1), 3)
            clauses.append(Clause(tuple((v, rng.random() < 0.5) for v in vs)))
        f = Cnf(var_count, tuple(clauses))
        if cover_all and any(not f.occurrences(v) for v in range(1, var_count + 1)):
            continue
        if is_planar(incidence_graph(f)).planar:
            return f
    raise GenerationFailed(f"no planar formula after {retries} attempts")
