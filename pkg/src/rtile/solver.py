"""Exact and heuristic solvers for rectangle tiling under a tile budget.

``exact_decide`` is a canonical-cell branch-and-bound search over arbitrary
rectangles. ``structured_decide`` is an independent route specialised to
weight bound 3 with weights in {1, 2, 3}: every tile holding a 3 is a
singleton and every other tile is a straight piece of at most three cells, so
the question becomes a minimum-cardinality exact cover, solved per connected
component as a 0/1 program.
"""

from __future__ import annotations

import math
import os
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csc_matrix

from .errors import InfeasibleBudget, PreconditionViolated, ScaleExceeded
from .instance import RtileInstance, Tile, Tiling, tile_weight

DEFAULT_NODE_LIMIT = 2_000_000
EXACT_CELL_LIMIT = 64


def _node_limit() -> int:
    raw = os.environ.get("RTILE_SEARCH_LIMIT")
    return int(raw) if raw else DEFAULT_NODE_LIMIT


def _grid_of(grid) -> list[list[int]]:
    if isinstance(grid, RtileInstance):
        grid = grid.weights
    return [list(row) for row in grid]


def exact_decide(grid: Sequence[Sequence[int]], p: int, W: int,
                 node_limit: Optional[int] = None) -> Optional[Tiling]:
    """Tiling with at most ``p`` tiles of weight at most ``W``, or None.

    The witness is the lexicographically least tiling (tiles sorted by their
    top-left corner, each compared as ``(r1, c1, r2, c2)``).
    """
    g = _grid_of(grid)
    h, w = len(g), len(g[0]) if g else 0
    n = h * w
    if n > EXACT_CELL_LIMIT:
        raise ScaleExceeded(f"{n} cells exceed exact search bound {EXACT_CELL_LIMIT}")
    if n == 0:
        return Tiling(())
    if p < 1 or any(v > W for row in g for v in row):
        return None
    limit = node_limit or _node_limit()

    vals = [g[i // w][i % w] for i in range(n)]
    forced = [v >= W for v in vals]  # any partner cell would push the weight past W
    # rectangles anchored at each cell, ordered by (r2, c2)
    anchored: list[list[tuple[int, int, Tile]]] = []
    for i in range(n):
        r, c = divmod(i, w)
        opts = []
        for r2 in range(r, h):
            for c2 in range(c, w):
                t = Tile(r, c, r2, c2)
                wt = tile_weight(g, t)
                if wt > W:
                    continue
                mask = 0
                for rr, cc in t.cells():
                    mask |= 1 << (rr * w + cc)
                opts.append((mask, wt, t))
        anchored.append(opts)

    full = (1 << n) - 1
    failed: dict[int, int] = {}
    nodes = 0
    chosen: list[Tile] = []

    def search(covered: int, budget: int, rem_weight: int, rem_forced: int) -> bool:
        nonlocal nodes
        if covered == full:
            return True
        nodes += 1
        if nodes > limit:
            raise ScaleExceeded(f"search exceeded {limit} nodes")
        if budget <= 0 or math.ceil(rem_weight / W) > budget or rem_forced > budget:
            return False
        if failed.get(covered, -1) >= budget:
            return False
        free = ~covered & full
        i = (free & -free).bit_length() - 1
        for mask, wt, t in anchored[i]:
            if mask & covered:
                continue
            chosen.append(t)
            nf = rem_forced - (1 if forced[i] else 0)
            if search(covered | mask, budget - 1, rem_weight - wt, nf):
                return True
            chosen.pop()
        failed[covered] = max(failed.get(covered, -1), budget)
        return False

    if search(0, p, sum(vals), sum(forced)):
        return Tiling(tuple(chosen))
    return None


def rectangle_weights(grid: Sequence[Sequence[int]]) -> list[int]:
    g = _grid_of(grid)
    h, w = len(g), len(g[0])
    pre = np.zeros((h + 1, w + 1), dtype=np.int64)
    pre[1:, 1:] = np.cumsum(np.cumsum(np.array(g, dtype=np.int64), 0), 1)
    out = set()
    for r1 in range(h):
        for r2 in range(r1, h):
            for c1 in range(w):
                for c2 in range(c1, w):
                    out.add(int(pre[r2 + 1, c2 + 1] - pre[r1, c2 + 1] - pre[r2 + 1, c1] + pre[r1, c1]))
    return sorted(out)


def exact_optimize(grid: Sequence[Sequence[int]], p: int, max_side: int = 8) -> tuple[int, Tiling]:
    """Least achievable maximum tile weight with at most ``p`` tiles."""
    g = _grid_of(grid)
    if p < 1:
        raise InfeasibleBudget("budget must be at least 1")
    if len(g) > max_side or len(g[0]) > max_side:
        raise ScaleExceeded(f"grid exceeds {max_side}x{max_side}")
    top = max(v for row in g for v in row)
    cands = [x for x in rectangle_weights(g) if x >= top]
    lo, hi = 0, len(cands) - 1  # the full-grid weight is always feasible
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        t = exact_decide(g, p, cands[mid])
        if t is not None:
            best = (cands[mid], t)
            hi = mid - 1
        else:
            lo = mid + 1
    assert best is not None
    return best


# -- structured route (W = 3) -------------------------------------------------

def _straight_pieces(g: list[list[int]], W: int) -> list[tuple[tuple[int, int], ...]]:
    """Singletons, dominoes and straight trominoes of non-forced cells with weight <= W."""
    h, w = len(g), len(g[0])
    pieces = []
    for r in range(h):
        for c in range(w):
            if g[r][c] >= W:
                continue
            for dr, dc in ((0, 1), (1, 0)):
                run = [(r, c)]
                total = g[r][c]
                for step in (1, 2):
                    rr, cc = r + dr * step, c + dc * step
                    if rr >= h or cc >= w or g[rr][cc] >= W:
                        break
                    total += g[rr][cc]
                    if total > W:
                        break
                    run.append((rr, cc))
                    pieces.append(tuple(run))
            pieces.append(((r, c),))
    return sorted(set(pieces))


def _min_cover(cells: list[tuple[int, int]], pieces: list[tuple[tuple[int, int], ...]]):
    index = {cell: i for i, cell in enumerate(cells)}
    rows, cols = [], []
    for j, piece in enumerate(pieces):
        for cell in piece:
            rows.append(index[cell])
            cols.append(j)
    A = csc_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(cells), len(pieces)))
    res = milp(
        c=np.ones(len(pieces)),
        constraints=LinearConstraint(A, 1, 1),
        integrality=np.ones(len(pieces)),
        bounds=Bounds(0, 1),
    )
    if res.status != 0:
        raise RuntimeError(f"0/1 cover program failed: {res.message}")
    return [int(j) for j in np.flatnonzero(res.x > 0.5)]


class _Cover:
    """Min exact cover over straight pieces, with chain contraction.

    If cells x1, x2 only belong to {x1}, {x2}, {x0,x1}, {x1,x2}, {x2,x3},
    then x1 and x2 can be dropped in exchange for one fixed tile and a
    virtual piece {x0,x3} standing for the pair {x0,x1} + {x2,x3}; every other
    local choice is matched (or beaten) by {x1,x2} plus singletons. Long
    alternating loop stretches shrink to a handful of cells this way.
    """

    def __init__(self, pieces):
        self.table: list[frozenset] = []      # every piece ever created, real or virtual
        self.live: set[int] = set()
        self.by_cell: dict = {}
        self.records: list[tuple[int, int, int, int]] = []  # virtual, left, right, middle
        for pc in pieces:
            self._add(frozenset(pc))
        self.real = len(self.table)

    @property
    def offset(self) -> int:
        return len(self.records)

    def _add(self, cells: frozenset) -> int:
        pid = len(self.table)
        self.table.append(cells)
        self.live.add(pid)
        for c in cells:
            self.by_cell.setdefault(c, set()).add(pid)
        return pid

    def _drop(self, pid: int) -> None:
        self.live.discard(pid)
        for c in self.table[pid]:
            self.by_cell[c].discard(pid)

    def _chain_at(self, x1):
        ids = self.by_cell.get(x1, ())
        if len(ids) != 3 or sorted(len(self.table[i]) for i in ids) != [1, 2, 2]:
            return None
        nbrs = [next(iter(self.table[i] - {x1})) for i in ids if len(self.table[i]) == 2]
        return nbrs if nbrs[0] != nbrs[1] else None

    def _piece(self, a, b) -> Optional[int]:
        hits = [i for i in self.by_cell[a] if self.table[i] == frozenset((a, b))]
        return hits[0] if len(hits) == 1 else None

    def contract(self) -> None:
        queue = list(self.by_cell)
        while queue:
            x1 = queue.pop()
            n1 = self._chain_at(x1)
            if n1 is None:
                continue
            for x2 in n1:
                n2 = self._chain_at(x2)
                if n2 is None or x1 not in n2:
                    continue
                x0 = next(iter(set(n1) - {x2}))
                x3 = next(iter(set(n2) - {x1}))
                if len({x0, x1, x2, x3}) < 4:
                    continue
                left, mid, right = self._piece(x0, x1), self._piece(x1, x2), self._piece(x2, x3)
                if None in (left, mid, right):
                    continue
                for i in list(self.by_cell[x1] | self.by_cell[x2]):
                    self._drop(i)
                del self.by_cell[x1], self.by_cell[x2]
                virt = self._add(frozenset((x0, x3)))
                self.records.append((virt, left, right, mid))
                queue.extend((x0, x3))
                break

    def expand(self, chosen: set[int]) -> list[frozenset]:
        chosen = set(chosen)
        for virt, left, right, mid in reversed(self.records):
            if virt in chosen:
                chosen.discard(virt)
                chosen |= {left, right}
            else:
                chosen.add(mid)
        assert all(i < self.real for i in chosen)
        return [self.table[i] for i in sorted(chosen)]

    def solve(self, contract: bool = True) -> list[frozenset]:
        if contract:
            self.contract()
        ids = sorted(self.live)
        chosen: set[int] = set()
        comps = _components([self.table[i] for i in ids])
        where = {c: k for k, group in enumerate(comps) for c in group}
        members: dict[int, list[int]] = {}
        for i in ids:
            members.setdefault(where[next(iter(self.table[i]))], []).append(i)
        for k, group in enumerate(comps):
            mine = members[k]
            if len(mine) == 1:
                chosen.update(mine)
                continue
            cells = sorted(group)
            picked = _min_cover(cells, [tuple(self.table[i]) for i in mine])
            chosen.update(mine[k] for k in picked)
        return self.expand(chosen)


def _components(pieces) -> list[set]:
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for pc in pieces:
        pc = list(pc)
        for c in pc:
            parent.setdefault(c, c)
        for c in pc[1:]:
            a, b = find(pc[0]), find(c)
            if a != b:
                parent[a] = b
    groups: dict = {}
    for c in parent:
        groups.setdefault(find(c), set()).add(c)
    return list(groups.values())


def structured_min_tiles(grid, W: int = 3, contract: bool = True) -> Tiling:
    """Minimum-cardinality tiling by tiles of weight <= W; requires weights in
    {1, 2, 3} and W = 3 (so only straight pieces of <= 3 cells can occur)."""
    g = _grid_of(grid)
    if W != 3:
        raise PreconditionViolated("structured route requires W = 3")
    if any(v not in (1, 2, 3) for row in g for v in row):
        raise PreconditionViolated("structured route requires weights in {1, 2, 3}")
    h, w = len(g), len(g[0])
    tiles = [Tile(r, c, r, c) for r in range(h) for c in range(w) if g[r][c] >= W]
    for piece in _Cover(_straight_pieces(g, W)).solve(contract):
        tiles.append(Tile.spanning(piece))
    return Tiling(tuple(sorted(tiles)))


def structured_decide(grid, p: Optional[int] = None, W: int = 3) -> Optional[Tiling]:
    """Decide tileability with at most ``p`` tiles of weight <= 3.

    Accepts an :class:`RtileInstance` (budget and bound taken from it unless
    overridden) or a bare grid.
    """
    if isinstance(grid, RtileInstance):
        if p is None:
            p = grid.p
        W = grid.W if W is None else W
    if p is None:
        raise PreconditionViolated("budget required")
    best = structured_min_tiles(grid, W)
    return best if len(best) <= p else None


# -- baseline heuristic ----------------------------------------------------------

def _band_slices(g, r0: int, r1: int, W: int) -> Optional[list[Tile]]:
    w = len(g[0])
    colw = [sum(g[r][c] for r in range(r0, r1 + 1)) for c in range(w)]
    if max(colw) > W:
        return None
    tiles, start, acc = [], 0, 0
    for c, x in enumerate(colw):
        if acc + x > W:
            tiles.append(Tile(r0, start, r1, c - 1))
            start, acc = c, 0
        acc += x
    tiles.append(Tile(r0, start, r1, w - 1))
    return tiles


def _greedy_bands(g, W: int) -> Optional[list[Tile]]:
    h = len(g)
    best: list[Optional[list[Tile]]] = [None] * (h + 1)
    best[0] = []
    for r1 in range(h):
        for r0 in range(r1 + 1):
            if best[r0] is None:
                continue
            band = _band_slices(g, r0, r1, W)
            if band is None:
                continue
            cand = best[r0] + band
            if best[r1 + 1] is None or len(cand) < len(best[r1 + 1]):
                best[r1 + 1] = cand
    return best[h]


def approx_greedy(grid, p: int) -> Tiling:
    """Row-band slicing with a binary search on the weight bound. No guarantee."""
    g = _grid_of(grid)
    if p < 1:
        raise InfeasibleBudget("budget must be at least 1")
    cands = [x for x in rectangle_weights(g) if x >= max(map(max, g))]
    lo, hi = 0, len(cands) - 1
    best = None
    while lo <= hi:
        mid = (lo + hi) // 2
        tiles = _greedy_bands(g, cands[mid])
        if tiles is not None and len(tiles) <= p:
            best = tiles
            hi = mid - 1
        else:
            lo = mid + 1
    assert best is not None  # the single full-grid tile always fits
    return Tiling(tuple(best))


def max_weight(grid, tiling: Tiling) -> int:
    g = _grid_of(grid)
    return max(tile_weight(g, t) for t in tiling)
