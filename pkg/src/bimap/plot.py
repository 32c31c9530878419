"""Static SVG scatterplots of a bitext space."""
from __future__ import annotations

from xml.sax.saxutils import escape

from bimap.geometry import BitextMap, BitextSpace

SIZE = 600
MARGIN = 40


def _num(v: float) -> str:
    return f"{v:.2f}"


def render_svg(space: BitextSpace, candidates=(), chain_points=(), bitext_map: BitextMap | None = None,
               title: str = "") -> str:
    """SVG text with axes, the main diagonal, candidate points (one ``<circle>``
    each), chain points (one ``<rect>`` each) and the map as a polyline.

    Output depends only on the arguments.
    """
    scale = SIZE / max(space.width, space.height)
    pw, ph = space.width * scale, space.height * scale

    def px(x, y):
        return MARGIN + x * scale, MARGIN + ph - y * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_num(pw + 2 * MARGIN)}" '
        f'height="{_num(ph + 2 * MARGIN)}" viewBox="0 0 {_num(pw + 2 * MARGIN)} {_num(ph + 2 * MARGIN)}">',
        f"<title>{escape(title or f'bitext space {space.width} x {space.height}')}</title>",
        '<g id="axes" stroke="black" stroke-width="1" fill="none">',
        f'<line x1="{_num(MARGIN)}" y1="{_num(MARGIN + ph)}" x2="{_num(MARGIN + pw)}" y2="{_num(MARGIN + ph)}"/>',
        f'<line x1="{_num(MARGIN)}" y1="{_num(MARGIN + ph)}" x2="{_num(MARGIN)}" y2="{_num(MARGIN)}"/>',
        "</g>",
        f'<text x="{_num(MARGIN + pw / 2)}" y="{_num(ph + 1.7 * MARGIN)}" font-size="12" text-anchor="middle">'
        f"x ({space.width} chars)</text>",
        f'<text x="{_num(MARGIN / 3)}" y="{_num(MARGIN + ph / 2)}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 {_num(MARGIN / 3)} {_num(MARGIN + ph / 2)})">y ({space.height} chars)</text>',
    ]
    x0, y0 = px(0, 0)
    x1, y1 = px(space.width, space.height)
    out.append(f'<line id="diagonal" x1="{_num(x0)}" y1="{_num(y0)}" x2="{_num(x1)}" y2="{_num(y1)}" '
               'stroke="gray" stroke-dasharray="4 3"/>')
    if bitext_map is not None:
        coords = " ".join(f"{_num(a)},{_num(b)}" for a, b in (px(x, y) for x, y in bitext_map.anchors.tolist()))
        out.append(f'<polyline id="map" points="{coords}" fill="none" stroke="crimson" stroke-width="1.2"/>')
    out.append('<g id="candidates" fill="steelblue" fill-opacity="0.6">')
    for p in candidates:
        cx, cy = px(float(p[0]), float(p[1]))
        out.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="1.5"/>')
    out.append("</g>")
    out.append('<g id="chains" fill="darkorange">')
    for p in chain_points:
        cx, cy = px(float(p[0]), float(p[1]))
        out.append(f'<rect x="{_num(cx - 2)}" y="{_num(cy - 2)}" width="4" height="4"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
