"""Geometry of the reduction: variable loops and clause gadget placements.

Routing works from the straight-line grid drawing of the clause-variable
graph. The triangulated drawing is oriented bottom-to-top, which gives a
planar st-graph; a visibility representation is read off it (vertices become
horizontal bars on distinct rows, edges vertical segments that cross no bar).
On the fine grid every variable becomes a width-3 region made of its bar
and one corridor per incident clause, and its loop is the boundary ring of
that region. At each clause the three corridors dock at the gadget's left,
top (or bottom) and right ports.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import networkx as nx

from .embedding import GridEmbedding, embed_grid
from .errors import NotPlanar, RoutingFailed
from .formula import Cnf, clause_node, incidence_graph, is_planar, var_node
from .gadgetry import DOWN, LEFT, RIGHT, UP, GadgetPattern, builtin_gadget
from .instance import ValidationReport

Cell = tuple[int, int]

MIN_SCALE = 7
SCALE_RETRIES = 12
MARGIN = 3


@dataclass(frozen=True)
class Port:
    variable: int
    clause: int
    role: str
    gadget_cell: Cell
    loop_cells: tuple[Cell, Cell]


@dataclass(frozen=True)
class GadgetPlacement:
    clause: int
    anchor: Cell
    flipped: bool
    pattern: GadgetPattern

    @property
    def footprint(self) -> dict[Cell, int]:
        return self.pattern.cells


@dataclass
class Layout:
    grid_side: int
    gadget_placements: dict[int, GadgetPlacement] = field(default_factory=dict)
    loops: dict[int, list[Cell]] = field(default_factory=dict)
    ports: dict[tuple[int, int], Port] = field(default_factory=dict)
    degenerate: list[int] = field(default_factory=list)
    scale: int = 0

    def loop_ports(self, var: int) -> list[Port]:
        """Ports of a loop in clockwise order of their first loop cell."""
        index = {cell: i for i, cell in enumerate(self.loops[var])}
        ps = [p for (v, _), p in self.ports.items() if v == var]
        return sorted(ps, key=lambda p: port_start(self.loops[var], p, index))

    def dump(self) -> str:
        lines = [f"layout side {self.grid_side} scale {self.scale}"]
        for v in sorted(self.loops):
            cells = " ".join(f"{r},{c}" for r, c in self.loops[v])
            lines.append(f"loop x{v} len {len(self.loops[v])}: {cells}")
        for j in sorted(self.gadget_placements):
            gp = self.gadget_placements[j]
            cells = " ".join(f"{r},{c}={v}" for (r, c), v in sorted(gp.footprint.items()))
            lines.append(f"gadget c{j} anchor {gp.anchor[0]},{gp.anchor[1]} "
                         f"flip {int(gp.flipped)}: {cells}")
        for (v, j) in sorted(self.ports):
            p = self.ports[(v, j)]
            (a, b) = p.loop_cells
            lines.append(f"port x{v} c{j} {p.role}: gadget {p.gadget_cell[0]},{p.gadget_cell[1]} "
                         f"loop {a[0]},{a[1]} {b[0]},{b[1]}")
        for v in self.degenerate:
            lines.append(f"degenerate x{v}")
        return "\n".join(lines) + "\n"


def port_start(loop: list[Cell], port: Port, index: Optional[dict] = None) -> int:
    """Cyclic index of the first (clockwise) of the port's two loop cells."""
    index = index or {cell: i for i, cell in enumerate(loop)}
    i, j = index[port.loop_cells[0]], index[port.loop_cells[1]]
    n = len(loop)
    return i if (i + 1) % n == j else j


# ---------------------------------------------------------------------------
# visibility representation
# ---------------------------------------------------------------------------

def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


@dataclass
class Visibility:
    row: dict       # vertex -> bar row rank
    column: dict    # kept edge (var, clause) -> distinct column rank


def visibility(e: GridEmbedding, kept_edges) -> Visibility:
    """Rows from the bottom-to-top order of the drawing; edge columns from
    longest paths in the dual of the triangulated st-graph."""
    coords = e.coordinates
    key = {v: (xy[1], xy[0]) for v, xy in coords.items()}
    order = sorted(coords, key=key.get)
    rank = {v: i for i, v in enumerate(order)}

    tri = e.triangulation
    seen: set = set()
    faces = []
    for u, v in tri.edges():
        if (u, v) in seen:
            continue
        faces.append(tuple(tri.traverse_face(u, v, mark_half_edges=seen)))
    outer = frozenset(e.outer)
    outer_ids = [i for i, f in enumerate(faces) if frozenset(f) == outer]
    if len(outer_ids) != 1:
        raise RoutingFailed("cannot identify the outer face")
    outer_id = outer_ids[0]
    edge_faces: dict[frozenset, list[int]] = {}
    for i, f in enumerate(faces):
        for a, b in zip(f, f[1:] + f[:1]):
            edge_faces.setdefault(frozenset((a, b)), []).append(i)

    dual = nx.DiGraph()
    dual.add_nodes_from(["L*", "R*"])
    left_of: dict[frozenset, object] = {}
    for ekey, fids in edge_faces.items():
        u, v = sorted(ekey, key=rank.get)
        sides = {}
        for fi in fids:
            if fi == outer_id:
                continue
            w = next(x for x in faces[fi] if x not in ekey)
            sides[fi] = "L" if _cross(coords[u], coords[v], coords[w]) > 0 else "R"
        if len(fids) == 1 or outer_id in fids:
            inner = next(fi for fi in fids if fi != outer_id)
            other = "R*" if sides[inner] == "L" else "L*"
            lf, rf = (inner, other) if sides[inner] == "L" else (other, inner)
        else:
            a, b = fids
            lf, rf = (a, b) if sides[a] == "L" else (b, a)
        dual.add_edge(lf, rf)
        left_of[ekey] = lf
    if not nx.is_directed_acyclic_graph(dual):
        raise RoutingFailed("dual orientation is cyclic")
    xpos = {n: 0 for n in dual}
    for n in nx.topological_sort(dual):
        for m in dual.successors(n):
            xpos[m] = max(xpos[m], xpos[n] + 1)

    units = []
    for (a, b) in kept_edges:
        lo, hi = sorted((rank[a], rank[b]))
        units.append((xpos[left_of[frozenset((a, b))]], lo, hi, (a, b)))
    units.sort(key=lambda t: (t[0], t[1], t[2]))
    column = {t[3]: i for i, t in enumerate(units)}
    return Visibility(rank, column)


# ---------------------------------------------------------------------------
# routing
# ---------------------------------------------------------------------------

def _rect(r0: int, r1: int, c0: int, c1: int) -> set[Cell]:
    r0, r1 = sorted((r0, r1))
    c0, c1 = sorted((c0, c1))
    return {(r, c) for r in range(r0, r1 + 1) for c in range(c0, c1 + 1)}


def boundary_ring(region: set[Cell]) -> list[Cell]:
    """Boundary cells of a region as a clockwise cycle (rows grow downward)."""
    ring = {cell for cell in region
            if any((cell[0] + dr, cell[1] + dc) not in region
                   for dr in (-1, 0, 1) for dc in (-1, 0, 1))}
    start = min(ring)
    nbrs = {}
    for cell in ring:
        ns = [(cell[0] + dr, cell[1] + dc) for dr, dc in (LEFT, UP, RIGHT, DOWN)]
        nbrs[cell] = [n for n in ns if n in ring]
        if len(nbrs[cell]) != 2:
            raise RoutingFailed(f"boundary of region is not a simple cycle at {cell}")
    cycle = [start]
    prev, cur = start, (start[0], start[1] + 1)
    if cur not in ring:
        raise RoutingFailed("unexpected boundary start")
    while cur != start:
        cycle.append(cur)
        a, b = nbrs[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(cycle) != len(ring):
        raise RoutingFailed("region boundary has several components")
    return cycle


def _route_at_scale(f: Cnf, vis: Visibility, scale: int, gadget: GadgetPattern) -> Layout:
    sx = sy = scale
    row = {v: MARGIN + 3 + sy * r for v, r in vis.row.items()}
    col = {e: MARGIN + 4 + sx * c for e, c in vis.column.items()}

    u_port, l_port, r_port = gadget.port("U"), gadget.port("L"), gadget.port("R")
    # column offset so the top corridor's left side sits on the U port column
    u_shift = u_port.cell[1] + 1

    regions: dict[int, set[Cell]] = {}
    placements: dict[int, GadgetPlacement] = {}
    port_specs: list[tuple[int, int, str]] = []

    for v in range(1, f.var_count + 1):
        es = [e for e in vis.column if e[0] == var_node(v)]
        if not es:
            continue
        cols = [col[e] for e in es]
        vr = row[var_node(v)]
        regions[v] = _rect(vr - 1, vr + 1, min(cols) - 1, max(cols) + 1)

    for j, clause in enumerate(f.clauses):
        cn = clause_node(j)
        es = sorted((e for e in vis.column if e[1] == cn), key=vis.column.get)
        e1, e2, e3 = es
        rc = row[cn]
        flip = row[e2[0]] > rc  # top corridor arrives from below: mirror the frame
        s = -1 if flip else 1

        def absr(rel: int) -> int:
            return rc + s * rel

        def relr(r: int) -> int:
            return (r - rc) * s

        oc = col[e2] - u_shift
        placed = gadget.transformed((rc, oc), flip_rows=flip)
        placements[j] = GadgetPlacement(j, (rc, oc), flip, placed)

        # top port: straight corridor
        v2 = e2[0][1]
        c2 = col[e2]
        tip = u_port.cell[0] - 1
        regions[v2] |= {(absr(r), c) for r, c in _rect(relr(row[e2[0]]), tip, c2 - 1, c2 + 1)}
        port_specs.append((v2, j, "U"))

        # left port: L-shaped corridor
        v1 = e1[0][1]
        c1 = col[e1]
        lr = l_port.cell[0]
        above = relr(row[e1[0]]) < 0
        band = (lr - 2, lr) if above else (lr, lr + 2)
        tip_c = oc + l_port.cell[1] - 1
        if tip_c <= c1 + 2:
            raise RoutingFailed("left corridor too short")
        horiz = _rect(band[0], band[1], c1 - 1, tip_c)
        vert = _rect(relr(row[e1[0]]), band[1] if above else band[0], c1 - 1, c1 + 1)
        regions[v1] |= {(absr(r), c) for r, c in horiz | vert}
        port_specs.append((v1, j, "L"))

        # right port: L-shaped corridor
        v3 = e3[0][1]
        c3 = col[e3]
        rr = r_port.cell[0]
        band = (rr, rr + 2)
        tip_c = oc + r_port.cell[1] + 1
        if tip_c >= c3 - 2:
            raise RoutingFailed("right corridor too short")
        above = relr(row[e3[0]]) < 0
        horiz = _rect(band[0], band[1], tip_c, c3 + 1)
        vert = _rect(relr(row[e3[0]]), band[1] if above else band[0], c3 - 1, c3 + 1)
        regions[v3] |= {(absr(r), c) for r, c in horiz | vert}
        port_specs.append((v3, j, "R"))

    loops = {v: boundary_ring(reg) for v, reg in regions.items()}
    ports = {}
    for v, j, role in port_specs:
        gp = placements[j].pattern.port(role)
        ports[(v, j)] = Port(v, j, role, gp.cell, (gp.outside(1), gp.outside(2)))

    cells = [c for lp in loops.values() for c in lp]
    cells += [c for gp in placements.values() for c in gp.footprint]
    side = max(max(r for r, _ in cells), max(c for _, c in cells)) + MARGIN + 1
    degenerate = [v for v in range(1, f.var_count + 1) if v not in loops]
    return Layout(side, placements, loops, ports, degenerate, scale)


def route_layout(f: Cnf, e: Optional[GridEmbedding] = None, min_scale: int = MIN_SCALE,
                 retries: int = SCALE_RETRIES) -> Layout:
    """Route loops and place gadgets; the smallest scale whose layout validates wins."""
    gadget = builtin_gadget()
    if f.k == 0:
        return Layout(1, degenerate=list(range(1, f.var_count + 1)), scale=0)
    ig = incidence_graph(f)
    if e is None:
        rep = is_planar(ig)
        if not rep.planar:
            raise NotPlanar("clause-variable graph is not planar")
        e = embed_grid(ig, rep.witness)
    kept = [(a, b) for a, b in ig.edges]
    vis = visibility(e, kept)
    last = None
    for scale in range(min_scale, min_scale + retries):
        try:
            layout = _route_at_scale(f, vis, scale, gadget)
        except RoutingFailed as exc:
            last = str(exc)
            continue
        report = validate_layout(layout, f)
        if report.ok:
            return layout
        last = report.violations[0]
    raise RoutingFailed(f"no valid layout up to scale {min_scale + retries - 1}: {last}")


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def _cheb(a: Cell, b: Cell) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _near(cells_a, cells_b, dist: int):
    """Pairs (a, b) with Chebyshev distance < dist, via bucketing."""
    bucket: dict[Cell, list[Cell]] = {}
    for b in cells_b:
        bucket.setdefault(b, []).append(b)
    for a in cells_a:
        for dr in range(-dist + 1, dist):
            for dc in range(-dist + 1, dist):
                nb = (a[0] + dr, a[1] + dc)
                if nb in bucket:
                    yield a, nb


def validate_layout(l: Layout, f: Optional[Cnf] = None) -> ValidationReport:
    rep = ValidationReport()
    owner: dict[Cell, int] = {}
    for v, loop in l.loops.items():
        n = len(loop)
        if len(set(loop)) != n:
            rep.add(f"loop x{v}: repeated cell")
        index = {cell: i for i, cell in enumerate(loop)}
        for i, cell in enumerate(loop):
            if not (0 <= cell[0] < l.grid_side and 0 <= cell[1] < l.grid_side):
                rep.add(f"loop x{v}: cell {cell} outside grid")
            nxt = loop[(i + 1) % n]
            if abs(cell[0] - nxt[0]) + abs(cell[1] - nxt[1]) != 1:
                rep.add(f"loop x{v}: cells {cell} and {nxt} not adjacent")
            for d in (RIGHT, DOWN):
                nb = (cell[0] + d[0], cell[1] + d[1])
                if nb in index and (index[nb] - i) % n not in (1, n - 1):
                    rep.add(f"loop x{v}: self-touching at {cell} / {nb}")
        if n % 2:
            rep.add(f"loop x{v}: odd length {n}")
        for cell in loop:
            if cell in owner:
                rep.add(f"loops x{owner[cell]} and x{v} share cell {cell}")
            owner[cell] = v

    loop_items = sorted(l.loops.items())
    for (va, la), (vb, lb) in itertools.combinations(loop_items, 2):
        for a, b in _near(la, lb, 2):
            rep.add(f"loops touch: x{va} at {a} and x{vb} at {b}")
            break

    port_cells = {p.gadget_cell: p for p in l.ports.values()}
    allowed_contacts = set()
    own_port_loop: dict[int, set[Cell]] = {}
    for p in l.ports.values():
        allowed_contacts.add((p.gadget_cell, p.loop_cells[0]))
        own_port_loop.setdefault(p.clause, set()).update(p.loop_cells)
    gadget_cells: dict[Cell, int] = {}
    for j, gp in l.gadget_placements.items():
        for cell in gp.footprint:
            if not (0 <= cell[0] < l.grid_side and 0 <= cell[1] < l.grid_side):
                rep.add(f"gadget c{j}: cell {cell} outside grid")
            gadget_cells[cell] = j
    for (ja, ga), (jb, gb) in itertools.combinations(sorted(l.gadget_placements.items()), 2):
        for a, b in _near(ga.footprint, gb.footprint, 2):
            rep.add(f"gadgets c{ja} and c{jb} too close at {a} / {b}")
            break
    all_loop = [c for lp in l.loops.values() for c in lp]
    for g, c in _near(gadget_cells, all_loop, 2):
        if g in owner:
            rep.add(f"gadget c{gadget_cells[g]} overlaps a loop at {g}")
            continue
        orth = abs(g[0] - c[0]) + abs(g[1] - c[1]) == 1
        if orth and (g, c) in allowed_contacts:
            continue
        if not orth and (g in port_cells or c in own_port_loop.get(gadget_cells[g], ())):
            continue  # a diagonal pair only shares a tile via a 2x2 box holding a 3
        rep.add(f"gadget c{gadget_cells[g]} cell {g} touches loop x{owner[c]} at {c}")

    for (v, j), p in sorted(l.ports.items()):
        a, b = p.loop_cells
        g = p.gadget_cell
        if (a[0] - g[0], a[1] - g[1]) != (b[0] - a[0], b[1] - a[1]) or abs(a[0] - g[0]) + abs(a[1] - g[1]) != 1:
            rep.add(f"port x{v} c{j}: gadget cell and loop cells not a straight 3x1")
        if v not in l.loops or a not in l.loops[v] or b not in l.loops[v]:
            rep.add(f"port x{v} c{j}: loop cells not on loop x{v}")
            continue
        loop = l.loops[v]
        i1, i2 = loop.index(a), loop.index(b)
        if (i1 - i2) % len(loop) not in (1, len(loop) - 1):
            rep.add(f"port x{v} c{j}: loop cells not consecutive")

    if f is not None:
        for j, clause in enumerate(f.clauses):
            vs = sorted(v for (v, jj) in l.ports if jj == j)
            if vs != sorted(clause.variables):
                rep.add(f"clause c{j}: ports on loops {vs}, expected {sorted(clause.variables)}")
        for v in l.loops:
            want = sorted(f.occurrences(v))
            got = sorted(jj for (vv, jj) in l.ports if vv == v)
            if want != got:
                rep.add(f"loop x{v}: visits clauses {got}, expected {want}")
    return rep
