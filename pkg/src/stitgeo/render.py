"""SVG rendering of planar tessellations.

Draws the window rectangle and every splitting chord; chords born after a
cutoff time are dashed (the newest generation), mirroring the usual
cell-division snapshots.
"""

from __future__ import annotations

SVG_SIZE = 512.0
MARGIN = 8.0


def render_svg(tess, since: float | None = None, size: float = SVG_SIZE) -> str:
    """Return an SVG document for a 2-d tessellation.

    ``since``: birth-time cutoff for dashed strokes; defaults to 80% of the
    latest birth time so the newest generation stands out.
    """
    if tess.dim != 2:
        raise ValueError("SVG rendering supports d=2 only")
    (x0, y0), (x1, y1) = tess.window.lo, tess.window.hi
    span = max(x1 - x0, y1 - y0)
    scale = (size - 2 * MARGIN) / span
    if since is None:
        latest = max((e.birth_time for e in tess.events), default=0.0)
        since = 0.8 * latest

    def sx(x):
        return MARGIN + (x - x0) * scale

    def sy(y):
        # SVG y grows downward
        return size - MARGIN - (y - y0) * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" '
        f'height="{size:.0f}" viewBox="0 0 {size:.0f} {size:.0f}">',
        f'<rect x="{sx(x0):.2f}" y="{sy(y1):.2f}" width="{(x1 - x0) * scale:.2f}" '
        f'height="{(y1 - y0) * scale:.2f}" fill="white" stroke="black" '
        'stroke-width="1.5"/>',
    ]
    for e in tess.events:
        (ax, ay), (bx, by) = e.face.verts
        dash = ' stroke-dasharray="6 4"' if e.birth_time >= since else ""
        lines.append(
            f'<line x1="{sx(ax):.2f}" y1="{sy(ay):.2f}" x2="{sx(bx):.2f}" '
            f'y2="{sy(by):.2f}" stroke="black" stroke-width="1"{dash}/>'
        )
    lines.append("</svg>")
    return "\n".join(lines)


def chord_count(svg_text: str) -> int:
    """Number of chord elements in a rendered document (window excluded)."""
    return svg_text.count("<line ")
