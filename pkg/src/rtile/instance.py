"""RTILE instances, tiles, tilings and their line-oriented text formats.

Instance file::

    rtile <side> <p> <W>
    <side rows of side space-separated integers>

Tiling file: one tile per line, ``r1 c1 r2 c2`` (0-based, inclusive).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import OutOfBounds

Grid = tuple[tuple[int, ...], ...]


@dataclass(frozen=True, order=True)
class Tile:
    r1: int
    c1: int
    r2: int
    c2: int

    def cells(self):
        for r in range(self.r1, self.r2 + 1):
            for c in range(self.c1, self.c2 + 1):
                yield (r, c)

    @property
    def area(self) -> int:
        return (self.r2 - self.r1 + 1) * (self.c2 - self.c1 + 1)

    def line(self) -> str:
        return f"{self.r1} {self.c1} {self.r2} {self.c2}"

    @classmethod
    def spanning(cls, cells: Iterable[tuple[int, int]]) -> "Tile":
        cells = list(cells)
        rows = [r for r, _ in cells]
        cols = [c for _, c in cells]
        return cls(min(rows), min(cols), max(rows), max(cols))


@dataclass(frozen=True)
class Tiling:
    tiles: tuple[Tile, ...] = ()

    def __len__(self) -> int:
        return len(self.tiles)

    def __iter__(self):
        return iter(self.tiles)

    def canonical(self) -> "Tiling":
        return Tiling(tuple(sorted(self.tiles)))


@dataclass(frozen=True)
class RtileInstance:
    side: int
    weights: Grid
    p: int
    W: int = 3

    def __post_init__(self):
        if len(self.weights) != self.side or any(len(row) != self.side for row in self.weights):
            raise ValueError("weight grid must be side x side")
        if any(v < 1 for row in self.weights for v in row):
            raise ValueError("weights must be positive")

    def cells_with(self, value: int) -> int:
        return sum(v == value for row in self.weights for v in row)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, msg: str) -> None:
        self.violations.append(msg)

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        self.violations.extend(prefix + v for v in other.violations)

    def __str__(self) -> str:
        return "ok" if self.ok else "\n".join(self.violations)


def as_grid(rows: Sequence[Sequence[int]]) -> Grid:
    return tuple(tuple(int(v) for v in row) for row in rows)


def tile_weight(grid: Sequence[Sequence[int]], t: Tile) -> int:
    h, w = len(grid), len(grid[0]) if grid else 0
    if not (0 <= t.r1 <= t.r2 < h and 0 <= t.c1 <= t.c2 < w):
        raise OutOfBounds(f"tile {t.line()} outside {h}x{w} grid")
    return sum(grid[r][c] for r, c in t.cells())


def validate_tiling(grid: Sequence[Sequence[int]], tiles: Iterable[Tile],
                    p: Optional[int] = None, W: Optional[int] = None) -> ValidationReport:
    rep = ValidationReport()
    tiles = list(tiles)
    h, w = len(grid), len(grid[0]) if grid else 0
    owner: dict[tuple[int, int], Tile] = {}
    for t in tiles:
        if not (0 <= t.r1 <= t.r2 < h and 0 <= t.c1 <= t.c2 < w):
            rep.add(f"out of bounds: tile {t.line()}")
            continue
        for cell in t.cells():
            if cell in owner:
                rep.add(f"overlap at {cell}: tiles {owner[cell].line()} and {t.line()}")
            else:
                owner[cell] = t
        if W is not None:
            wt = tile_weight(grid, t)
            if wt > W:
                rep.add(f"weight {wt} > {W}: tile {t.line()}")
    for r in range(h):
        for c in range(w):
            if (r, c) not in owner:
                rep.add(f"gap at {(r, c)}")
    if p is not None and len(tiles) > p:
        rep.add(f"count {len(tiles)} > {p}")
    return rep


# -- text formats ----------------------------------------------------------------

def format_instance(inst: RtileInstance) -> str:
    lines = [f"rtile {inst.side} {inst.p} {inst.W}"]
    lines += [" ".join(str(v) for v in row) for row in inst.weights]
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> RtileInstance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty instance file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "rtile":
        raise ValueError(f"bad instance header {lines[0]!r}")
    try:
        side, p, W = (int(x) for x in head[1:])
    except ValueError:
        raise ValueError(f"bad instance header {lines[0]!r}") from None
    if side < 1 or p < 1 or W < 1:
        raise ValueError("side, p and W must be positive")
    if len(lines) - 1 != side:
        raise ValueError(f"expected {side} rows, found {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        try:
            row = tuple(int(x) for x in ln.split())
        except ValueError:
            raise ValueError(f"non-integer weight in row {ln!r}") from None
        if len(row) != side:
            raise ValueError(f"row has {len(row)} entries, expected {side}")
        rows.append(row)
    return RtileInstance(side, tuple(rows), p, W)


def format_tiling(tiling: Iterable[Tile]) -> str:
    return "".join(t.line() + "\n" for t in tiling)


def parse_tiling(text: str) -> Tiling:
    tiles = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 4:
            raise ValueError(f"bad tile line {ln!r}")
        try:
            r1, c1, r2, c2 = (int(x) for x in parts)
        except ValueError:
            raise ValueError(f"bad tile line {ln!r}") from None
        if r1 > r2 or c1 > c2 or min(r1, c1) < 0:
            raise ValueError(f"degenerate tile {ln!r}")
        tiles.append(Tile(r1, c1, r2, c2))
    return Tiling(tuple(tiles))
