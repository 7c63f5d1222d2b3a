"""Clause gadget and variable-loop machinery.

A clause gadget is a small patch of 1/2 cells with three value-1 ports, each
facing outward (left, up, right in the canonical frame). A port is *joined*
when its cell is absorbed into a straight three-cell tile together with the
two adjacent loop cells. The contract: covering the gadget alone takes three
tiles of weight <= 3, while any nonempty set of joined ports leaves a
remainder that takes exactly two.

A variable loop is a simple rectilinear cycle of cells filled with 1s and 2s:
alternating, except for 2112 blocks at ports (and as parity fixers) and
211112 phase changers. Its minimum tilings by weight-<=3 tiles come in
exactly two modes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .errors import (
    FootprintTooLarge,
    InvalidFill,
    NoPorts,
    ParityUnresolvable,
    StraightRunUnavailable,
    TooLong,
)

Cell = tuple[int, int]

LEFT, UP, RIGHT, DOWN = (0, -1), (-1, 0), (0, 1), (1, 0)
ROLES = ("L", "U", "R")
ROLE_DIRECTIONS = {"L": LEFT, "U": UP, "R": RIGHT}
CERT_FOOTPRINT_LIMIT = 16
GADGET_W = 3


def _add(a: Cell, b: Cell, k: int = 1) -> Cell:
    return (a[0] + k * b[0], a[1] + k * b[1])


# ---------------------------------------------------------------------------
# clause gadget
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetPort:
    cell: Cell
    direction: Cell

    def outside(self, k: int) -> Cell:
        """The k-th cell beyond the port along its direction (k=1 is the near loop cell)."""
        return _add(self.cell, self.direction, k)


@dataclass(frozen=True)
class GadgetPattern:
    values: tuple[tuple[Cell, int], ...]
    ports: tuple[GadgetPort, ...]

    @property
    def cells(self) -> dict[Cell, int]:
        return dict(self.values)

    @property
    def footprint(self) -> int:
        return len(self.values)

    def port(self, role: str) -> GadgetPort:
        return self.ports[ROLES.index(role)]

    def transformed(self, origin: Cell, flip_rows: bool = False) -> "GadgetPattern":
        """Translate to ``origin``; optionally mirror top-to-bottom first."""
        def tx(cell: Cell) -> Cell:
            r, c = cell
            return (origin[0] + (-r if flip_rows else r), origin[1] + c)

        def td(d: Cell) -> Cell:
            return ((-d[0] if flip_rows else d[0]), d[1])

        return GadgetPattern(
            tuple(sorted((tx(cell), v) for cell, v in self.values)),
            tuple(GadgetPort(tx(p.cell), td(p.direction)) for p in self.ports),
        )


@dataclass
class CertReport:
    minima: dict[frozenset, int]
    problems: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        if self.problems:
            return False
        return all(m == (3 if not s else 2) for s, m in self.minima.items())

    def text(self) -> str:
        lines = ["gadget certificate"]
        lines += [f"problem: {p}" for p in self.problems]
        for s in sorted(self.minima, key=lambda s: (len(s), sorted(s))):
            name = "{" + ",".join(ROLES[i] if i < len(ROLES) else str(i) for i in sorted(s)) + "}"
            want = 3 if not s else 2
            lines.append(f"joined {name}: min tiles {self.minima[s]} (required {want})")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


def min_local_tiles(cells: dict[Cell, int], W: int = GADGET_W) -> Optional[int]:
    """Exhaustive minimum number of rectangles (inside ``cells``) of weight <= W
    covering ``cells`` exactly; None if impossible."""
    order = sorted(cells)
    index = {cell: i for i, cell in enumerate(order)}
    n = len(order)
    rects: list[list[int]] = [[] for _ in range(n)]
    for i, (r, c) in enumerate(order):
        # rectangles whose row-major-first cell is (r, c)
        for h in range(1, n + 1):
            for w in range(1, n + 1):
                if h * w > n:
                    break
                block = [(r + dr, c + dc) for dr in range(h) for dc in range(w)]
                if not all(b in cells for b in block):
                    continue
                if sum(cells[b] for b in block) > W:
                    continue
                mask = 0
                for b in block:
                    mask |= 1 << index[b]
                rects[i].append(mask)
    full = (1 << n) - 1

    @lru_cache(maxsize=None)
    def best(covered: int) -> Optional[int]:
        if covered == full:
            return 0
        free = ~covered & full
        i = (free & -free).bit_length() - 1
        out = None
        for mask in rects[i]:
            if mask & covered:
                continue
            sub = best(covered | mask)
            if sub is not None and (out is None or sub + 1 < out):
                out = sub + 1
        return out

    return best(0)


def certify_gadget(g: GadgetPattern) -> CertReport:
    cells = g.cells
    if len(cells) > CERT_FOOTPRINT_LIMIT:
        raise FootprintTooLarge(f"{len(cells)} cells exceed {CERT_FOOTPRINT_LIMIT}")
    problems = []
    if len(g.ports) != 3:
        problems.append(f"expected 3 ports, found {len(g.ports)}")
    for i, p in enumerate(g.ports):
        if cells.get(p.cell) != 1:
            problems.append(f"port {i} at {p.cell} is not a 1-cell")
        if p.outside(1) in cells or p.outside(2) in cells:
            problems.append(f"port {i} cannot be extended outward")
        inward = p.outside(-1)
        if cells.get(inward, GADGET_W) + 2 <= GADGET_W:
            # inward cell + port + one loop cell would be a legal tile that
            # swallows a single loop cell and a second gadget cell
            problems.append(f"port {i} admits a straight tile with its inward neighbour {inward}")
    minima: dict[frozenset, int] = {}
    if not problems:
        for size in range(len(g.ports) + 1):
            for subset in itertools.combinations(range(len(g.ports)), size):
                rest = {c: v for c, v in cells.items()
                        if c not in {g.ports[i].cell for i in subset}}
                m = min_local_tiles(rest)
                minima[frozenset(subset)] = -1 if m is None else m
    return CertReport(minima, problems)


def cover_remainder(g: GadgetPattern, joined: Iterable[int]) -> list[list[Cell]]:
    """A minimum tiling of the gadget cells not absorbed by joined ports, as cell groups."""
    joined_cells = {g.ports[i].cell for i in joined}
    rest = {c: v for c, v in g.cells.items() if c not in joined_cells}
    target = min_local_tiles(rest)
    groups: list[list[Cell]] = []

    def search(remaining: dict[Cell, int], budget: int) -> bool:
        if not remaining:
            return True
        if budget == 0:
            return False
        r, c = min(remaining)
        for h in range(1, 4):
            for w in range(1, 4):
                block = [(r + dr, c + dc) for dr in range(h) for dc in range(w)]
                if not all(b in remaining for b in block):
                    continue
                if sum(remaining[b] for b in block) > GADGET_W:
                    continue
                groups.append(block)
                nxt = {k: v for k, v in remaining.items() if k not in block}
                if search(nxt, budget - 1):
                    return True
                groups.pop()
        return False

    assert target is not None and search(rest, target)
    return groups


def _tip_blocks(port: GadgetPort, role: str) -> list[list[Cell]]:
    """Candidate 3x3 corridor-tip blocks attached at a port (one per allowed side)."""
    r, c = port.cell
    if role == "U":
        return [[(r - 3 + i, c + j) for i in range(3) for j in range(3)]]
    if role == "R":
        return [[(r + i, c + 1 + j) for i in range(3) for j in range(3)]]
    return [[(r - 2 + i, c - 3 + j) for i in range(3) for j in range(3)],
            [(r + i, c - 3 + j) for i in range(3) for j in range(3)]]


def _cheb(a: Cell, b: Cell) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def routable(g: GadgetPattern) -> bool:
    """Corridor tips can dock at every port without touching the rest of the gadget
    or each other (the docking geometry the router uses)."""
    cells = g.cells
    all_blocks = []
    for role in ROLES:
        port = g.port(role)
        l1 = port.outside(1)
        for block in _tip_blocks(port, role):
            if l1 not in block or any(b in cells for b in block):
                return False
            for b in block:
                for d in (LEFT, UP, RIGHT, DOWN):
                    nb = _add(b, d)
                    if nb in cells and not (b == l1 and nb == port.cell):
                        return False
            all_blocks.append((role, block))
    for (ra, a), (rb, b) in itertools.combinations(all_blocks, 2):
        if ra != rb and min(_cheb(x, y) for x in a for y in b) < 2:
            return False
    return True


def _polyominoes(n: int) -> list[tuple[Cell, ...]]:
    shapes = {((0, 0),)}
    for _ in range(n - 1):
        grown = set()
        for s in shapes:
            cells = set(s)
            for cell in s:
                for d in (LEFT, UP, RIGHT, DOWN):
                    nb = _add(cell, d)
                    if nb in cells:
                        continue
                    new = cells | {nb}
                    r0 = min(r for r, _ in new)
                    c0 = min(c for _, c in new)
                    grown.add(tuple(sorted((r - r0, c - c0) for r, c in new)))
        shapes = grown
    return sorted(shapes)


def synth_gadget(max_footprint: int) -> Optional[GadgetPattern]:
    """Smallest certified, routable gadget; deterministic search order
    (footprint size, shape, values with 1 < 2, port choice)."""
    if max_footprint > 12:
        raise FootprintTooLarge("synthesis bound is 12 cells")
    for n in range(1, max_footprint + 1):
        if n < 3:
            continue
        for shape in _polyominoes(n):
            cellset = set(shape)
            options = {}
            for role in ROLES:
                d = ROLE_DIRECTIONS[role]
                options[role] = [c for c in shape
                                 if _add(c, d) not in cellset and _add(c, d, 2) not in cellset]
            for values in itertools.product((1, 2), repeat=n):
                val = dict(zip(shape, values))
                for pl, pu, pr in itertools.product(options["L"], options["U"], options["R"]):
                    if len({pl, pu, pr}) < 3 or any(val[p] != 1 for p in (pl, pu, pr)):
                        continue
                    g = GadgetPattern(
                        tuple(sorted(val.items())),
                        (GadgetPort(pl, LEFT), GadgetPort(pu, UP), GadgetPort(pr, RIGHT)),
                    )
                    if routable(g) and certify_gadget(g).passed:
                        return g
    return None


def builtin_gadget() -> GadgetPattern:
    """The canonical gadget: the first pattern ``synth_gadget`` finds, frozen.

    ::

        1 2 1 .
        . . 2 1

    Ports: left at (0,0), up at (0,2), right at (1,3).
    """
    return GadgetPattern(
        (((0, 0), 1), ((0, 1), 2), ((0, 2), 1), ((1, 2), 2), ((1, 3), 1)),
        (GadgetPort((0, 0), LEFT), GadgetPort((0, 2), UP), GadgetPort((1, 3), RIGHT)),
    )


# ---------------------------------------------------------------------------
# variable loops
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SegmentPlan:
    """Loop stretch from one port start to the next (clockwise)."""
    start: int
    length: int
    negation_pair: tuple[bool, bool]

    @property
    def place_changer(self) -> bool:
        even = self.length % 2 == 0
        differ = self.negation_pair[0] != self.negation_pair[1]
        return (even and differ) or (not even and not differ)


@dataclass(frozen=True)
class PlanCounters:
    odd: int    # segments of odd length
    diff: int   # segments whose end ports have different negations
    x: int      # even segments with different negations

    @property
    def changers(self) -> int:
        return self.odd - self.diff + 2 * self.x


def plan_segments(loop_len: int, port_starts: Sequence[int],
                  negations: Sequence[bool]) -> list[SegmentPlan]:
    """One plan per consecutive (cyclic) pair of ports.

    ``port_starts`` are loop indices of the first cell of each port's "11",
    in increasing order; ``negations[i]`` says whether the variable occurs
    negated in the clause of port i.
    """
    if not port_starts:
        raise NoPorts("loop has no ports")
    if list(port_starts) != sorted(port_starts) or len(set(port_starts)) != len(port_starts):
        raise ValueError("port starts must be strictly increasing")
    k = len(port_starts)
    plans = []
    for i in range(k):
        s, t = port_starts[i], port_starts[(i + 1) % k]
        length = (t - s) % loop_len or loop_len
        plans.append(SegmentPlan(s, length, (negations[i], negations[(i + 1) % k])))
    return plans


def plan_counters(plans: Sequence[SegmentPlan]) -> PlanCounters:
    odd = sum(p.length % 2 for p in plans)
    diff = sum(p.negation_pair[0] != p.negation_pair[1] for p in plans)
    x = sum(p.length % 2 == 0 and p.negation_pair[0] != p.negation_pair[1] for p in plans)
    return PlanCounters(odd, diff, x)


@dataclass(frozen=True)
class LoopFill:
    cells: tuple[Cell, ...]
    values: tuple[int, ...]
    port_starts: tuple[int, ...] = ()
    phase_changers: tuple[int, ...] = ()   # index of the first 1 of each 1111
    fixers: tuple[int, ...] = ()           # index of the first 1 of each extra 2112

    def __len__(self) -> int:
        return len(self.values)

    @property
    def port_blocks(self) -> tuple[int, ...]:
        """Index of the leading 2 of each port's 2112."""
        n = len(self.values)
        return tuple((s - 1) % n for s in self.port_starts)

    @property
    def changer_count(self) -> int:
        return len(self.phase_changers)


def _collinear(cells: Sequence[Cell]) -> bool:
    return len({r for r, _ in cells}) == 1 or len({c for _, c in cells}) == 1


def _gap_pattern(gap: Sequence[Cell], changer: bool) -> tuple[list[int], Optional[int], Optional[int]]:
    """Values for the cells strictly between two port blocks (both neighbours are 2).

    The gap is a run of 1-blocks separated by single 2s; blocks are single 1s,
    optionally one straight 1111 (phase changer) and at most one 11 (fixer)
    when parity demands it. Returns values, changer offset and fixer offset.
    """
    g = len(gap)
    c = 1 if changer else 0
    f = (g + 1 - c) % 2
    twice_k = g + 1 - 5 * c - 3 * f
    if twice_k < 0 or (c == 0 and f == 0 and twice_k < 2):
        raise ParityUnresolvable(f"segment gap of {g} cells cannot host the required pattern")
    k = twice_k // 2
    if not changer:
        if f:
            return [1, 1] + [2, 1] * k, None, 0
        return [1] + [2, 1] * (k - 1), None, None
    for pre in range(k + 1):
        o = 2 * pre
        if _collinear(gap[o:o + 4]):
            vals = [1, 2] * pre + [1, 1, 1, 1]
            fix = None
            if f:
                fix = len(vals) + 1
                vals += [2, 1, 1]
            vals += [2, 1] * (k - pre)
            return vals, o, fix
    raise StraightRunUnavailable("no straight run of four cells for a phase changer")


def fill_loop(cells: Sequence[Cell], plans: Sequence[SegmentPlan]) -> LoopFill:
    """Values 1/2 along a loop: 2112 around every port, a 211112 changer in
    each segment whose plan asks for one, alternation everywhere else."""
    n = len(cells)
    if n % 2:
        raise ParityUnresolvable(f"loop length {n} is odd")
    values: list[Optional[int]] = [None] * n
    starts = [p.start for p in plans]
    for s in starts:
        for off, v in ((-1, 2), (0, 1), (1, 1), (2, 2)):
            i = (s + off) % n
            if values[i] is not None and values[i] != v:
                raise ParityUnresolvable(f"port blocks overlap at loop index {i}")
            values[i] = v
    changers, fixers = [], []
    for p in plans:
        first = p.start + 3
        g = p.length - 4
        if g < 1:
            raise ParityUnresolvable(f"ports {p.length} apart leave no room between blocks")
        idx = [(first + j) % n for j in range(g)]
        vals, co, fo = _gap_pattern([cells[i] for i in idx], p.place_changer)
        for i, v in zip(idx, vals):
            values[i] = v
        if co is not None:
            changers.append(idx[co])
        if fo is not None:
            fixers.append(idx[fo])
    return LoopFill(tuple(cells), tuple(values), tuple(starts), tuple(sorted(changers)),
                    tuple(sorted(fixers)))


def check_fill(fill: LoopFill):
    """Violations of the fill invariants, as a list of messages."""
    from .instance import ValidationReport

    rep = ValidationReport()
    n = len(fill.values)
    vals = fill.values
    if any(v not in (1, 2) for v in vals):
        rep.add("loop values must be 1 or 2")
    for i in range(n):
        if vals[i] == 2 and vals[(i + 1) % n] == 2:
            rep.add(f"two consecutive 2s at loop index {i}")
    allowed = set()
    for s in fill.port_starts:
        allowed.add(s % n)
    for s in fill.fixers:
        allowed.add(s % n)
    for s in fill.phase_changers:
        allowed.update({s % n, (s + 1) % n, (s + 2) % n})
        run = [fill.cells[(s + j) % n] for j in range(4)]
        if [vals[(s + j) % n] for j in range(-1, 5)] != [2, 1, 1, 1, 1, 2]:
            rep.add(f"phase changer at {s} is not 211112")
        if not _collinear(run):
            rep.add(f"phase changer at {s} is not on a straight run")
    for s in list(fill.port_starts) + list(fill.fixers):
        if [vals[(s + j) % n] for j in range(-1, 3)] != [2, 1, 1, 2]:
            rep.add(f"block at {s} is not 2112")
    for i in range(n):
        if vals[i] == 1 and vals[(i + 1) % n] == 1 and i not in allowed:
            rep.add(f"unexpected 1,1 at loop index {i}")
    if fill.changer_count % 2:
        rep.add(f"odd number of phase changers ({fill.changer_count})")
    return rep


@dataclass(frozen=True)
class LoopTilingStats:
    a1: int
    a2: int
    a3: int

    @property
    def tiles(self) -> int:
        return self.a1 + self.a2 + self.a3


@dataclass(frozen=True)
class LoopTilings:
    minimum: int
    tilings: tuple[tuple[tuple[int, ...], ...], ...]   # arcs of loop indices
    stats: tuple[LoopTilingStats, ...]


MAX_ENUM_LOOP = 40


def enumerate_min_loop_tilings(fill: LoopFill) -> LoopTilings:
    """All minimum tilings of the loop cells alone by tiles of weight <= 3.

    A tile holds a run of 1 to 3 consecutive loop cells (three only when
    collinear); non-consecutive loop cells are never adjacent.
    """
    n = len(fill.values)
    if n > MAX_ENUM_LOOP:
        raise TooLong(f"loop of {n} cells exceeds enumeration bound {MAX_ENUM_LOOP}")
    vals = fill.values
    for i in range(n):
        if vals[i] == 2 and vals[(i + 1) % n] == 2:
            raise InvalidFill(f"two consecutive 2s at loop index {i}")

    def arc_ok(start: int, size: int) -> bool:
        idx = [(start + j) % n for j in range(size)]
        if sum(vals[i] for i in idx) > GADGET_W:
            return False
        return size < 3 or _collinear([fill.cells[i] for i in idx])

    found: list[tuple[tuple[int, ...], ...]] = []
    # the arc holding index 0 starts at 0, -1 or -2
    for back in range(3):
        for size in range(back + 1, 4):
            start = (-back) % n
            if size > n or not arc_ok(start, size):
                continue
            first = tuple((start + j) % n for j in range(size))
            lo, hi = size - back, n - back  # remaining linear positions [lo, hi)

            @lru_cache(maxsize=None)
            def best(i: int) -> Optional[int]:
                if i == hi:
                    return 0
                out = None
                for sz in range(1, 4):
                    if i + sz > hi or not arc_ok(i % n, sz):
                        continue
                    sub = best(i + sz)
                    if sub is not None and (out is None or sub + 1 < out):
                        out = sub + 1
                return out

            def walk(i: int, acc: list) -> None:
                if i == hi:
                    found.append(tuple([first] + acc))
                    return
                target = best(i)
                for sz in range(1, 4):
                    if i + sz > hi or not arc_ok(i % n, sz):
                        continue
                    sub = best(i + sz)
                    if sub is not None and sub + 1 == target:
                        walk(i + sz, acc + [tuple((i + j) % n for j in range(sz))])

            if best(lo) is not None:
                walk(lo, [])
    if not found:
        raise InvalidFill("loop cannot be tiled")
    m = min(len(t) for t in found)
    tilings = sorted({tuple(sorted(t)) for t in found if len(t) == m})
    stats = tuple(LoopTilingStats(*(sum(len(a) == k for a in t) for k in (1, 2, 3)))
                  for t in tilings)
    return LoopTilings(m, tuple(tilings), stats)


def complete_loop_tiling(fill: LoopFill, first: Sequence[int]) -> Optional[list[tuple[int, ...]]]:
    """Fewest-tile loop tiling that contains the arc ``first`` (consecutive
    loop indices); linear time, usable on loops of any length."""
    n = len(fill.values)
    vals = fill.values

    def arc_ok(start: int, size: int) -> bool:
        idx = [(start + j) % n for j in range(size)]
        if sum(vals[i] for i in idx) > GADGET_W:
            return False
        return size < 3 or _collinear([fill.cells[i] for i in idx])

    first = tuple(i % n for i in first)
    if not arc_ok(first[0], len(first)):
        return None
    lo, hi = first[0] + len(first), first[0] + n
    best: list[Optional[int]] = [None] * (hi - lo + 1)
    choice = [0] * (hi - lo + 1)
    best[hi - lo] = 0
    for i in range(hi - 1, lo - 1, -1):
        for sz in (2, 1, 3):
            if i + sz > hi or not arc_ok(i % n, sz):
                continue
            sub = best[i + sz - lo]
            if sub is not None and (best[i - lo] is None or sub + 1 < best[i - lo]):
                best[i - lo], choice[i - lo] = sub + 1, sz
    if best[0] is None:
        return None
    arcs = [first]
    i = lo
    while i < hi:
        sz = choice[i - lo]
        arcs.append(tuple((i + j) % n for j in range(sz)))
        i += sz
    return arcs


def count_min_loop_tilings(fill: LoopFill) -> tuple[int, int]:
    """(minimum tile count, number of minimum tilings) of the loop cells, by
    dynamic programming; no length bound."""
    n = len(fill.values)
    vals = fill.values

    def arc_ok(start: int, size: int) -> bool:
        idx = [(start + j) % n for j in range(size)]
        if sum(vals[i] for i in idx) > GADGET_W:
            return False
        return size < 3 or _collinear([fill.cells[i] for i in idx])

    totals: dict[int, int] = {}
    for back in range(3):
        for size in range(back + 1, 4):
            if size > n or not arc_ok((-back) % n, size):
                continue
            lo, hi = size - back, n - back
            best: list[Optional[tuple[int, int]]] = [None] * (hi - lo + 1)
            best[hi - lo] = (0, 1)
            for i in range(hi - 1, lo - 1, -1):
                cur = None
                for sz in (1, 2, 3):
                    if i + sz > hi or not arc_ok(i % n, sz) or best[i + sz - lo] is None:
                        continue
                    m, c = best[i + sz - lo]
                    if cur is None or m + 1 < cur[0]:
                        cur = (m + 1, c)
                    elif m + 1 == cur[0]:
                        cur = (cur[0], cur[1] + c)
                best[i - lo] = cur
            if best[0] is not None:
                m, c = best[0]
                totals[m + 1] = totals.get(m + 1, 0) + c
    if not totals:
        raise InvalidFill("loop cannot be tiled")
    m = min(totals)
    return m, totals[m]
