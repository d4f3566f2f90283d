"""Static SVG rendering of persistence diagrams.

Hand-written SVG keeps the bytes a pure function of the input points.
Degree-0 points are red circles and degree-1 points blue squares; the
dashed diagonal marks zero persistence.
"""
from __future__ import annotations

from typing import Iterable, Tuple

SIZE = 400
MARGIN = 50
GLYPH = 4.0


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def diagram_svg(points: Iterable[Tuple[int, float, float]], title: str = "") -> str:
    """SVG document for ``(degree, birth, death)`` points, birth on x and death on y."""
    pts = list(points)
    lo, hi = 0.0, 1.0
    if pts:
        vals = [v for _, b, d in pts for v in (b, d)]
        lo, hi = min(lo, min(vals)), max(hi, max(vals))
    span = hi - lo or 1.0
    plot = SIZE - 2 * MARGIN

    def sx(v):
        return MARGIN + (v - lo) / span * plot

    def sy(v):
        return SIZE - MARGIN - (v - lo) / span * plot

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<title>{_escape(title)}</title>' if title else "",
        '<g class="axes" stroke="black" stroke-width="1">',
        f'<line x1="{MARGIN}" y1="{SIZE - MARGIN}" x2="{SIZE - MARGIN}" y2="{SIZE - MARGIN}"/>',
        f'<line x1="{MARGIN}" y1="{SIZE - MARGIN}" x2="{MARGIN}" y2="{MARGIN}"/>',
        "</g>",
        f'<line class="diagonal" x1="{_fmt(sx(lo))}" y1="{_fmt(sy(lo))}" x2="{_fmt(sx(hi))}" '
        f'y2="{_fmt(sy(hi))}" stroke="gray" stroke-dasharray="4,3"/>',
        '<g font-family="sans-serif" font-size="12" text-anchor="middle">',
        f'<text x="{SIZE / 2:.0f}" y="{SIZE - 15}">birth</text>',
        f'<text x="15" y="{SIZE / 2:.0f}" transform="rotate(-90 15 {SIZE / 2:.0f})">death</text>',
        f'<text x="{MARGIN}" y="{SIZE - MARGIN + 15}">{lo:.3g}</text>',
        f'<text x="{SIZE - MARGIN}" y="{SIZE - MARGIN + 15}">{hi:.3g}</text>',
        f'<text x="{MARGIN - 20}" y="{SIZE - MARGIN + 4}">{lo:.3g}</text>',
        f'<text x="{MARGIN - 20}" y="{MARGIN + 4}">{hi:.3g}</text>',
        '<text x="340" y="30" fill="red">H0</text>',
        '<text x="370" y="30" fill="blue">H1</text>',
        "</g>",
    ]
    for degree, birth, death in sorted(pts):
        x, y = sx(birth), sy(death)
        if degree == 0:
            out.append(f'<circle class="h0" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{GLYPH}" '
                       'fill="none" stroke="red"/>')
        else:
            out.append(f'<rect class="h1" x="{_fmt(x - GLYPH)}" y="{_fmt(y - GLYPH)}" '
                       f'width="{2 * GLYPH}" height="{2 * GLYPH}" fill="none" stroke="blue"/>')
    out.append("</svg>")
    return "\n".join(line for line in out if line) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
