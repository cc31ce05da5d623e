"""SVG scatter plots of planar FM points.

Each tree level below the root is drawn shrunk by a further factor eps,
so infinitesimal clusters become visible.  eps only affects the picture.
"""
from __future__ import annotations

from fractions import Fraction

from ..errors import InvalidInput
from ..nested import Leaf, internal_vertices
from .points import FMPoint, positions_in_plane

SIZE = 400
MARGIN = 40


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def point_svg(x: FMPoint, eps: Fraction | float = Fraction(1, 5)) -> str:
    if x.D != 2:
        raise InvalidInput("only D = 2 points can be plotted")
    eps = float(eps)
    if not 0 < eps < 1:
        raise InvalidInput("eps must lie strictly between 0 and 1")
    pos = positions_in_plane(x, eps)
    xs = [p[0] for p in pos.values()]
    ys = [p[1] for p in pos.values()]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    scale = (SIZE - 2 * MARGIN) / span

    def screen(p):
        # svg y grows downwards
        return MARGIN + (p[0] - min(xs)) * scale, SIZE - MARGIN - (p[1] - min(ys)) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    if not isinstance(x.tree, Leaf):
        for v in internal_vertices(x.tree):
            if v.leaves == x.leaves:
                continue
            pts = [screen(pos[i]) for i in sorted(v.leaves)]
            cx = sum(p[0] for p in pts) / len(pts)
            cy = sum(p[1] for p in pts) / len(pts)
            r = max(((p[0] - cx) ** 2 + (p[1] - cy) ** 2) ** 0.5 for p in pts) + 8
            out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{_fmt(r)}" fill="none" stroke="#999" stroke-dasharray="3,3"/>')
    for lab in sorted(pos):
        cx, cy = screen(pos[lab])
        out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="black"/>')
        out.append(f'<text x="{_fmt(cx + 6)}" y="{_fmt(cy - 6)}" font-size="12" font-family="sans-serif">{lab}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
