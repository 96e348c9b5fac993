"""Static SVG of a scene and its restricted diagram."""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .evoronoi import EVoronoiDiagram
from .hull import build_hull
from .kernel import Point, Segment
from .point import MerResult, mer_point

PALETTE = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def _xy(p: Point) -> str:
    return f"{float(p.x):.6g},{float(-p.y):.6g}"


def render_svg(F: Sequence[Point], s: Segment, d: EVoronoiDiagram | None = None, width: int = 640) -> str:
    F = list(F)
    pts = F + [s.a, s.b]
    xs = [float(p.x) for p in pts]
    ys = [float(-p.y) for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    pad = 0.05 * max(x1 - x0, y1 - y0, 1.0)
    vb = (x0 - pad, y0 - pad, x1 - x0 + 2 * pad, y1 - y0 + 2 * pad)
    unit = vb[2] / width
    height = int(width * vb[3] / vb[2]) or width

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="{vb[0]:.6g} {vb[1]:.6g} {vb[2]:.6g} {vb[3]:.6g}">',
        f'<g fill="none" stroke-width="{unit:.4g}">',
    ]
    h = build_hull(F)
    if h.vertices:
        ring = " ".join(_xy(p) for p in h.vertices)
        out.append(f'<polygon class="hull" points="{ring}" stroke="#999" stroke-dasharray="{4 * unit:.4g}"/>')
    out.append(f'<line class="segment" x1="{float(s.a.x):.6g}" y1="{float(-s.a.y):.6g}" '
               f'x2="{float(s.b.x):.6g}" y2="{float(-s.b.y):.6g}" stroke="#000"/>')

    if d is not None:
        for c in d.cells:
            color = PALETTE[c.site % len(PALETTE)]
            mid = s.at((c.t_lo + c.t_hi) / 2)
            res = mer_point(F, mid)
            if isinstance(res, MerResult) and res.cet is not None:
                tri = " ".join(_xy(F[i]) for i in res.cet)
                out.append(f'<polygon class="cet" points="{tri}" stroke="{color}" stroke-opacity="0.35"/>')
            a, b = s.at(c.t_lo), s.at(c.t_hi)
            out.append(
                f'<polyline class="cell" data-site="{c.site}" points="{_xy(a)} {_xy(b)}" '
                f'stroke="{color}" stroke-width="{4 * unit:.4g}">'
                f"<title>site {c.site}: t in [{escape(str(c.t_lo))}, {escape(str(c.t_hi))}]</title></polyline>"
            )
    out.append("</g>")
    for i, p in enumerate(F):
        color = PALETTE[i % len(PALETTE)]
        out.append(
            f'<circle class="source" cx="{float(p.x):.6g}" cy="{float(-p.y):.6g}" r="{3 * unit:.4g}" '
            f'fill="{color}"><title>source {i} ({escape(str(p.x))}, {escape(str(p.y))})</title></circle>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
