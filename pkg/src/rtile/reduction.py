"""Formula to RTILE instance, and translations between assignments and tilings.

The grid is all 3s except for the clause gadgets and the filled variable
loops. The budget is::

    p_F = (sum over loops of (|Z| - P(Z))) / 2 + 2k + t

with |Z| the loop length, P(Z) its phase-changer count, k the clause count
and t the number of 3-cells. Loops take (|Z| - P(Z))/2 tiles in either of
their two minimum modes, gadgets take two tiles once some port is joined,
and every 3 is a singleton.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    BudgetExceeded,
    InconsistentModes,
    InvalidTiling,
    NotPlanar,
    ParityUnresolvable,
    ParityViolation,
    RoutingFailed,
    StraightRunUnavailable,
    UnsatisfiedClause,
)
from .formula import Assignment, Cnf, check_assignment, incidence_graph, is_planar
from .gadgetry import (
    ROLES,
    GadgetPattern,
    LoopFill,
    builtin_gadget,
    check_fill,
    complete_loop_tiling,
    cover_remainder,
    fill_loop,
    plan_counters,
    plan_segments,
)
from .instance import RtileInstance, Tile, Tiling, ValidationReport, validate_tiling
from .layout import MIN_SCALE, Layout, port_start, route_layout, validate_layout
from .embedding import embed_grid

W_BOUND = 3
FILL_RETRIES = 6


@dataclass
class ReductionCertificate:
    formula: Cnf
    layout: Layout
    fills: dict[int, LoopFill]
    gadget: GadgetPattern
    weights: tuple[tuple[int, ...], ...]
    loop_lengths: dict[int, int]
    changers: dict[int, int]
    k: int
    three_count: int
    budget: int
    planned_changers: dict[int, int] = field(default_factory=dict)

    @property
    def loop_term(self) -> int:
        return sum(self.loop_lengths[v] - self.changers[v] for v in self.loop_lengths) // 2

    def text(self) -> str:
        lines = [f"reduction side {self.layout.grid_side} clauses {self.k} "
                 f"variables {self.formula.var_count}"]
        for v in sorted(self.fills):
            fl = self.fills[v]
            lines.append(f"loop x{v}: |Z| {self.loop_lengths[v]} P {self.changers[v]} "
                         f"ports {len(fl.port_starts)} fixers {len(fl.fixers)}")
            lines.append("  values " + "".join(str(x) for x in fl.values))
        for v in self.layout.degenerate:
            lines.append(f"loop x{v}: omitted (no occurrences)")
        for j in sorted(self.layout.gadget_placements):
            gp = self.layout.gadget_placements[j]
            lines.append(f"gadget c{j}: anchor {gp.anchor[0]},{gp.anchor[1]} flip {int(gp.flipped)}")
        lines.append(f"budget: loops {self.loop_term} + 2k {2 * self.k} + t {self.three_count} "
                     f"= {self.budget}")
        return "\n".join(lines) + "\n"


def budget_formula(lengths, changers, k: int, t: int) -> int:
    """p_F from loop lengths and changer counts (parallel sequences)."""
    total = sum(z - p for z, p in zip(lengths, changers))
    if total % 2:
        raise ParityViolation(f"sum of |Z| - P(Z) is odd ({total})")
    return total // 2 + 2 * k + t


def compute_p(cert: ReductionCertificate) -> int:
    vs = sorted(cert.loop_lengths)
    return budget_formula([cert.loop_lengths[v] for v in vs], [cert.changers[v] for v in vs],
                          cert.k, cert.three_count)


def _loop_negations(f: Cnf, layout: Layout, var: int):
    ports = layout.loop_ports(var)
    loop = layout.loops[var]
    index = {cell: i for i, cell in enumerate(loop)}
    starts = [port_start(loop, p, index) for p in ports]
    negs = [f.clauses[p.clause].negated(var) for p in ports]
    return ports, starts, negs


def _fill_all(f: Cnf, layout: Layout) -> tuple[dict[int, LoopFill], dict[int, int]]:
    fills, planned = {}, {}
    for v in sorted(layout.loops):
        _, starts, negs = _loop_negations(f, layout, v)
        plans = plan_segments(len(layout.loops[v]), starts, negs)
        planned[v] = plan_counters(plans).changers
        fills[v] = fill_loop(layout.loops[v], plans)
    return fills, planned


def reduce(f: Cnf) -> tuple[RtileInstance, ReductionCertificate]:
    gadget = builtin_gadget()
    if f.k == 0:
        layout = route_layout(f)
        weights = ((3,),)
        cert = ReductionCertificate(f, layout, {}, gadget, weights, {}, {}, 0, 1, 1)
        return RtileInstance(1, weights, 1, W_BOUND), cert
    ig = incidence_graph(f)
    rep = is_planar(ig)
    if not rep.planar:
        raise NotPlanar("clause-variable graph is not planar")
    emb = embed_grid(ig, rep.witness)
    last: Optional[Exception] = None
    for extra in range(FILL_RETRIES):
        layout = route_layout(f, emb, min_scale=MIN_SCALE + extra)
        try:
            fills, planned = _fill_all(f, layout)
        except (ParityUnresolvable, StraightRunUnavailable) as exc:
            last = exc
            continue
        break
    else:
        raise RoutingFailed(f"no layout admits a valid loop fill: {last}")

    side = layout.grid_side
    grid = [[3] * side for _ in range(side)]
    for v, fl in fills.items():
        for (r, c), x in zip(fl.cells, fl.values):
            grid[r][c] = x
    for gp in layout.gadget_placements.values():
        for (r, c), x in gp.footprint.items():
            grid[r][c] = x
    weights = tuple(tuple(row) for row in grid)
    t = sum(x == 3 for row in weights for x in row)
    lengths = {v: len(fl) for v, fl in fills.items()}
    changers = {v: fl.changer_count for v, fl in fills.items()}
    cert = ReductionCertificate(f, layout, fills, gadget, weights, lengths, changers,
                                f.k, t, 0, planned)
    cert.budget = compute_p(cert)
    return RtileInstance(side, weights, cert.budget, W_BOUND), cert


def verify_reduction(cert: ReductionCertificate) -> ValidationReport:
    rep = ValidationReport()
    if cert.k:
        rep.extend(validate_layout(cert.layout, cert.formula), "layout: ")
    for v, fl in sorted(cert.fills.items()):
        if list(fl.cells) != list(cert.layout.loops.get(v, [])):
            rep.add(f"loop x{v}: fill does not follow the routed loop")
        rep.extend(check_fill(fl), f"loop x{v}: ")
        z = cert.loop_lengths.get(v)
        if z != len(fl):
            rep.add(f"loop x{v}: recorded |Z| {z} differs from fill length {len(fl)}")
        if z is not None and z % 2:
            rep.add(f"loop x{v}: odd length {z} (every closed grid loop is even)")
        pz = cert.changers.get(v)
        if pz != fl.changer_count:
            rep.add(f"loop x{v}: recorded P {pz} differs from fill ({fl.changer_count})")
        if pz is not None and pz % 2:
            rep.add(f"loop x{v}: odd phase-changer count {pz}")
        if v in cert.planned_changers and cert.planned_changers[v] != fl.changer_count:
            rep.add(f"loop x{v}: Odd - Diff + 2x = {cert.planned_changers[v]} "
                    f"but {fl.changer_count} changers placed")
    side = len(cert.weights)
    if any(len(row) != side for row in cert.weights):
        rep.add("grid is not square")
    if any(x not in (1, 2, 3) for row in cert.weights for x in row):
        rep.add("grid holds values outside 1..3")
    t = sum(x == 3 for row in cert.weights for x in row)
    if t != cert.three_count:
        rep.add(f"budget breakdown: t recorded {cert.three_count}, grid has {t} threes")
    try:
        p = compute_p(cert)
    except ParityViolation as exc:
        rep.add(f"budget not integral: {exc}")
    else:
        if p != cert.budget:
            rep.add(f"budget breakdown: recorded {cert.budget}, formula gives {p}")
    return rep


# ---------------------------------------------------------------------------
# assignments <-> tilings
# ---------------------------------------------------------------------------

def _arcs_to_tiles(fill: LoopFill, arcs) -> list[Tile]:
    return [Tile.spanning(fill.cells[i] for i in arc) for arc in arcs]


def assignment_to_tiling(cert: ReductionCertificate, a: Assignment) -> Tiling:
    f = cert.formula
    for j, clause in enumerate(f.clauses):
        if not clause.satisfied_by(a.values):
            raise UnsatisfiedClause(j)
    layout = cert.layout
    tiles: list[Tile] = []
    loop_arcs: dict[int, list[tuple[int, ...]]] = {}
    for v, fl in cert.fills.items():
        ports, starts, negs = _loop_negations(f, layout, v)
        s0 = starts[0]
        good = a.values[v] != negs[0]  # first port's literal true
        first = (s0, s0 + 1) if good else (s0 - 1, s0)
        arcs = complete_loop_tiling(fl, first)
        if arcs is None or len(arcs) != (len(fl) - fl.changer_count) // 2:
            raise InconsistentModes(f"loop x{v}: no minimum tiling in the requested mode")
        loop_arcs[v] = arcs

    for j, clause in enumerate(f.clauses):
        gp = layout.gadget_placements[j]
        joined = None
        for lit in clause.literals:
            var, neg = lit
            if a.values[var] != neg:
                joined = var
                break
        port = layout.ports[(joined, j)]
        loop = layout.loops[joined]
        n = len(loop)
        index = {cell: i for i, cell in enumerate(loop)}
        s = port_start(loop, port, index)
        pair = (s % n, (s + 1) % n)
        arcs = loop_arcs[joined]
        if pair not in arcs:
            raise InconsistentModes(f"loop x{joined}: port of clause {j} is not in good phase")
        arcs.remove(pair)
        cells = [port.gadget_cell] + [loop[i] for i in pair]
        tiles.append(Tile.spanning(cells))
        role_index = ROLES.index(port.role)
        for group in cover_remainder(gp.pattern, [role_index]):
            tiles.append(Tile.spanning(group))
    for v, arcs in loop_arcs.items():
        tiles.extend(_arcs_to_tiles(cert.fills[v], arcs))
    for r, row in enumerate(cert.weights):
        for c, x in enumerate(row):
            if x == 3:
                tiles.append(Tile(r, c, r, c))
    return Tiling(tuple(sorted(tiles)))


def tiling_to_assignment(cert: ReductionCertificate, tiling: Tiling) -> Assignment:
    f = cert.formula
    tiles = list(tiling)
    rep = validate_tiling(cert.weights, tiles, None, W_BOUND)
    if not rep.ok:
        raise InvalidTiling(rep.violations[0])
    if len(tiles) > cert.budget:
        raise BudgetExceeded(f"{len(tiles)} tiles exceed budget {cert.budget}")
    owner: dict[tuple[int, int], Tile] = {}
    for t in tiles:
        for cell in t.cells():
            owner[cell] = t

    values: dict[int, bool] = {}
    for (v, j), port in sorted(cert.layout.ports.items()):
        t = owner[port.gadget_cell]
        l1, l2 = port.loop_cells
        if owner[l1] is t:
            if owner[l2] is not t:
                raise InvalidTiling(f"port of clause {j} joined without its second loop cell")
            value = not f.clauses[j].negated(v)
            if values.setdefault(v, value) != value:
                raise InconsistentModes(f"x{v} joined with both polarities")
    a = Assignment({v: values.get(v, True) for v in range(1, f.var_count + 1)})
    if not check_assignment(f, a):
        j = next(j for j, c in enumerate(f.clauses) if not c.satisfied_by(a.values))
        raise InconsistentModes(f"extracted assignment falsifies clause {j}")
    return a
