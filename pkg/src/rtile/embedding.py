"""Straight-line grid drawings of planar graphs via Schnyder woods.

The graph is first fully triangulated (networkx), a canonical ordering is
peeled off from the outer face, the ordering induces a Schnyder wood
(three spanning trees rooted at the outer vertices), and each vertex is placed
at its region vertex counts. For m vertices every coordinate lies in
[0, m-2].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Optional

import networkx as nx
from networkx.algorithms.planar_drawing import triangulate_embedding

from .errors import NotPlanar

Point = tuple[int, int]


@dataclass
class GridEmbedding:
    coordinates: dict[Hashable, Point]
    triangulation: Optional[nx.PlanarEmbedding] = None
    outer: tuple = ()
    edges: list[tuple[Hashable, Hashable]] = field(default_factory=list)

    @property
    def extent(self) -> int:
        if not self.coordinates:
            return 0
        return max(max(x, y) for x, y in self.coordinates.values())


# -- exact segment geometry -------------------------------------------------------

def _orient(a: Point, b: Point, c: Point) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_cross(s: tuple[Point, Point], t: tuple[Point, Point]) -> bool:
    """True if two segments meet anywhere except at a shared endpoint."""
    a, b = s
    c, d = t
    shared = {a, b} & {c, d}
    o1, o2, o3, o4 = _orient(a, b, c), _orient(a, b, d), _orient(c, d, a), _orient(c, d, b)
    if shared:
        if len(shared) == 2:
            return True  # same segment twice
        # sharing one endpoint: they only conflict if collinear and overlapping
        if o1 == 0 and o2 == 0:
            p = shared.pop()
            oa = a if b == p else b
            oc = c if d == p else d
            # overlapping iff the other endpoints lie on the same side of p
            return (oa[0] - p[0]) * (oc[0] - p[0]) + (oa[1] - p[1]) * (oc[1] - p[1]) > 0
        return False
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


def vertex_on_edge(coords: dict, edges) -> list:
    """Vertices lying in the relative interior of a non-incident edge."""
    bad = []
    for u, v in edges:
        for w, p in coords.items():
            if w in (u, v):
                continue
            if _orient(coords[u], coords[v], p) == 0 and _on_segment(coords[u], coords[v], p):
                bad.append((w, (u, v)))
    return bad


def crossing_pairs(coords: dict, edges) -> list:
    edges = list(edges)
    out = []
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            s = (coords[edges[i][0]], coords[edges[i][1]])
            t = (coords[edges[j][0]], coords[edges[j][1]])
            if segments_cross(s, t):
                out.append((edges[i], edges[j]))
    return out


# -- Schnyder -------------------------------------------------------------------

def _outer_half_edge(emb: nx.PlanarEmbedding, outer: tuple) -> tuple:
    a1, a2, a3 = outer
    for h in ((a1, a2), (a2, a1)):
        face = emb.traverse_face(*h)
        if set(face) == {a1, a2, a3} and len(face) == 3:
            return h
    raise AssertionError("outer triangle not found")


def _boundary_path(emb: nx.PlanarEmbedding, h: tuple, v1, v2) -> list:
    """Outer boundary of the current graph as a path from v1 to v2 avoiding edge v1v2."""
    face = emb.traverse_face(*h)
    i = face.index(v1)
    face = face[i:] + face[:i]
    if face[1] == v2:
        face = [face[0]] + face[1:][::-1]
    assert face[-1] == v2, face
    return face


def schnyder_wood(emb: nx.PlanarEmbedding, outer: tuple):
    """Canonical ordering and the three parent maps of the induced Schnyder wood."""
    v1, v2, vn = outer
    h = _outer_half_edge(emb, outer)
    work = nx.PlanarEmbedding(emb)
    order = []
    removable_key = {v: i for i, v in enumerate(sorted(emb.nodes, key=repr))}
    n = emb.number_of_nodes()
    parent = [{}, {}, {}]
    current = vn
    for _ in range(n - 2):
        order.append(current)
        work.remove_node(current)
        if work.number_of_nodes() == 2:
            break
        path = _boundary_path(work, h, v1, v2)
        pos = {v: i for i, v in enumerate(path)}
        nbrs = sorted((v for v in emb.neighbors(current) if v in pos), key=pos.get)
        parent[0][current] = nbrs[0]
        parent[1][current] = nbrs[-1]
        for w in nbrs[1:-1]:
            parent[2][w] = current
        # next vertex: boundary vertex (not v1, v2) with no chord to the boundary
        best = None
        for i, v in enumerate(path[1:-1], 1):
            on_boundary = [w for w in work.neighbors(v) if w in pos]
            if len(on_boundary) == 2:
                if best is None or removable_key[v] < removable_key[best]:
                    best = v
        current = best
    # the last removed vertex sits between v1 and v2 only
    last = order[-1]
    order.reverse()
    order = [v1, v2] + order
    if last not in parent[0]:
        parent[0][last] = v1
        parent[1][last] = v2
    return order, parent


def _path(parent: dict, v) -> list:
    out = [v]
    while out[-1] in parent:
        out.append(parent[out[-1]])
    return out


def _inner_faces(emb: nx.PlanarEmbedding, outer: tuple) -> list[frozenset]:
    seen = set()
    faces = []
    for u, v in emb.edges():
        if (u, v) in seen:
            continue
        face = emb.traverse_face(u, v, mark_half_edges=seen)
        faces.append(frozenset(face))
    outer_set = frozenset(outer)
    out = [f for f in faces if f != outer_set]
    if len(out) == len(faces):
        raise AssertionError("outer face missing")
    if len(faces) - len(out) > 1:
        out.append(outer_set)  # n = 3: inner and outer face share vertex set
    return out


def schnyder_coordinates(emb: nx.PlanarEmbedding, outer: tuple) -> dict:
    v1, v2, vn = outer
    n = emb.number_of_nodes()
    _, parent = schnyder_wood(emb, outer)
    faces = _inner_faces(emb, outer)
    edge_faces: dict[frozenset, list[int]] = {}
    for i, f in enumerate(faces):
        fl = list(f)
        for a in range(3):
            for b in range(a + 1, 3):
                edge_faces.setdefault(frozenset((fl[a], fl[b])), []).append(i)
    roots = (v1, v2, vn)

    def region_vertices(v, i: int) -> set:
        """Vertices in the closed region bounded by P_{i+1}(v), P_{i+2}(v) and
        the outer edge between their roots."""
        pa = _path(parent[(i + 1) % 3], v)
        pb = _path(parent[(i + 2) % 3], v)
        walls = set()
        for p in (pa, pb):
            for a, b in zip(p, p[1:]):
                walls.add(frozenset((a, b)))
        base = frozenset((roots[(i + 1) % 3], roots[(i + 2) % 3]))
        start = [fi for fi in edge_faces[base]]
        seen = set()
        stack = list(start)
        while stack:
            fi = stack.pop()
            if fi in seen:
                continue
            seen.add(fi)
            fl = list(faces[fi])
            for a in range(3):
                for b in range(a + 1, 3):
                    e = frozenset((fl[a], fl[b]))
                    if e in walls or e == base:
                        continue
                    stack.extend(edge_faces[e])
        verts = set(pa) | set(pb)
        for fi in seen:
            verts |= faces[fi]
        return verts

    coords = {}
    for v in emb.nodes:
        if v in roots:
            continue
        xs = []
        for i in range(3):
            region = region_vertices(v, i)
            xs.append(len(region) - len(_path(parent[(i + 2) % 3], v)))
        coords[v] = (xs[0], xs[1])
    coords[v1] = (n - 2, 1)
    coords[v2] = (0, n - 2)
    coords[vn] = (1, 0)
    return coords


def _relabel_embedding(emb: nx.PlanarEmbedding, mapping: dict) -> nx.PlanarEmbedding:
    out = nx.PlanarEmbedding()
    out.set_data({mapping[v]: [mapping[w] for w in nbrs]
                  for v, nbrs in emb.get_data().items()})
    return out


def embed_grid(g, witness: Optional[nx.PlanarEmbedding] = None) -> GridEmbedding:
    """Crossing-free straight-line drawing of ``g`` with integer coordinates in
    [0, m-2] (m = number of vertices, m >= 3)."""
    from .formula import IncidenceGraph  # local import keeps module layering simple

    if isinstance(g, IncidenceGraph):
        g = g.to_networkx()
    if g.number_of_nodes() < 3:
        raise ValueError("grid embedding needs at least 3 vertices")
    # networkx walks node sets internally; integer labels keep the result
    # independent of string hashing
    nodes = sorted(g.nodes, key=repr)
    to_int = {v: i for i, v in enumerate(nodes)}
    if witness is None:
        planar, witness = nx.check_planarity(nx.relabel_nodes(g, to_int))
        if not planar:
            raise NotPlanar("graph is not planar")
    else:
        witness = _relabel_embedding(witness, to_int)
    tri, outer = triangulate_embedding(witness, fully_triangulate=True)
    tri = _relabel_embedding(tri, dict(enumerate(nodes)))
    outer = tuple(nodes[i] for i in outer[:3])
    coords = schnyder_coordinates(tri, outer)
    return GridEmbedding(coords, tri, outer, [tuple(e) for e in g.edges()])


def check_embedding(e: GridEmbedding) -> list[str]:
    """Violations of the grid-embedding contract (empty when valid)."""
    problems = []
    pts = list(e.coordinates.values())
    m = len(pts)
    if len(set(pts)) != m:
        problems.append("coordinates not distinct")
    if m >= 3 and any(not (0 <= x <= m - 2 and 0 <= y <= m - 2) for x, y in pts):
        problems.append(f"coordinates outside the {m - 2}x{m - 2} grid")
    for a, b in crossing_pairs(e.coordinates, e.edges):
        problems.append(f"edges {a} and {b} cross")
    for w, edge in vertex_on_edge(e.coordinates, e.edges):
        problems.append(f"vertex {w} lies on edge {edge}")
    return problems
