"""ASCII and SVG pictures of instances and tilings."""

from __future__ import annotations

from typing import Optional, Sequence
from xml.sax.saxutils import quoteattr

from .instance import Tiling

# junction glyph by (up, right, down, left) border presence
_JUNCTIONS = {
    (0, 0, 0, 0): " ", (1, 0, 1, 0): "│", (0, 1, 0, 1): "─",
    (0, 1, 1, 0): "┌", (0, 0, 1, 1): "┐", (1, 1, 0, 0): "└", (1, 0, 0, 1): "┘",
    (1, 1, 1, 0): "├", (1, 0, 1, 1): "┤", (0, 1, 1, 1): "┬", (1, 1, 0, 1): "┴",
    (1, 1, 1, 1): "┼", (1, 0, 0, 0): "│", (0, 0, 1, 0): "│", (0, 1, 0, 0): "─",
    (0, 0, 0, 1): "─",
}

PALETTE = {1: "#f7f7f7", 2: "#9ecae1", 3: "#3182bd"}


def _owner_map(h: int, w: int, tiling: Tiling) -> list[list[int]]:
    owner = [[-1] * w for _ in range(h)]
    for k, t in enumerate(tiling):
        for r, c in t.cells():
            owner[r][c] = k
    return owner


def render_ascii(weights: Sequence[Sequence[int]], tiling: Optional[Tiling] = None) -> str:
    """Without a tiling: rows of space-separated values. With one: values
    inside a box-drawing frame that outlines every tile."""
    h, w = len(weights), len(weights[0])
    if tiling is None:
        return "".join(" ".join(str(v) for v in row) + "\n" for row in weights)
    owner = _owner_map(h, w, tiling)

    def own(r: int, c: int) -> int:
        return owner[r][c] if 0 <= r < h and 0 <= c < w else -2

    def vwall(r: int, c: int) -> bool:  # border left of cell (r, c)
        return 0 <= r < h and own(r, c - 1) != own(r, c)

    def hwall(r: int, c: int) -> bool:  # border above cell (r, c)
        return 0 <= c < w and own(r - 1, c) != own(r, c)

    width = max(len(str(v)) for row in weights for v in row)
    lines = []
    for r in range(h + 1):
        top = []
        for c in range(w + 1):
            key = (int(vwall(r - 1, c)), int(hwall(r, c)), int(vwall(r, c)), int(hwall(r, c - 1)))
            top.append(_JUNCTIONS[key])
            if c < w:
                top.append(("─" if hwall(r, c) else " ") * width)
        lines.append("".join(top).rstrip())
        if r == h:
            break
        mid = []
        for c in range(w + 1):
            mid.append("│" if vwall(r, c) else " ")
            if c < w:
                mid.append(str(weights[r][c]).rjust(width))
        lines.append("".join(mid).rstrip())
    return "\n".join(lines) + "\n"


def render_svg(weights: Sequence[Sequence[int]], tiling: Optional[Tiling] = None,
               cell: int = 12) -> str:
    h, w = len(weights), len(weights[0])
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * cell}" height="{h * cell}" '
           f'viewBox="0 0 {w * cell} {h * cell}">']
    out.append('<g class="cells">')
    for r, row in enumerate(weights):
        for c, v in enumerate(row):
            fill = PALETTE.get(v, "#636363")
            out.append(f'<rect x="{c * cell}" y="{r * cell}" width="{cell}" height="{cell}" '
                       f'fill={quoteattr(fill)}/>')
    out.append("</g>")
    if tiling is not None:
        for t in tiling:
            x, y = t.c1 * cell, t.r1 * cell
            tw, th = (t.c2 - t.c1 + 1) * cell, (t.r2 - t.r1 + 1) * cell
            out.append(f'<g class="tile"><rect x="{x}" y="{y}" width="{tw}" height="{th}" '
                       f'fill="none" stroke="#000000" stroke-width="1"/></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
