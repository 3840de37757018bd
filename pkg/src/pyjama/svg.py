"""Static SVG figures. Coordinates are rounded to floats; the exact data is hashed into the caption."""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .geometry import PolySet

SIZE = 400
PAD = 30


def data_hash(obj) -> str:
    """sha256 of a canonical JSON rendering with exact rationals as strings."""

    def enc(o):
        if isinstance(o, Fraction):
            return f"{o.numerator}/{o.denominator}"
        if isinstance(o, PolySet):
            return [[[enc(v[0]), enc(v[1])] for v in p.vertices] for p in o.pieces]
        if isinstance(o, (list, tuple)):
            return [enc(x) for x in o]
        if isinstance(o, dict):
            return {str(k): enc(v) for k, v in o.items()}
        return o

    blob = json.dumps(enc(obj), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _header(w: int, h: int, title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f"<title>{_esc(title)}</title>",
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>',
    ]


def torus_figure(layers: Sequence[tuple[PolySet, str, str]], title: str, caption: str = "") -> str:
    """Draw PolySets on the unit square, later layers on top. ``layers``: (set, fill, label)."""
    w, h = SIZE + 2 * PAD, SIZE + 2 * PAD + 40

    def X(x):
        return PAD + float(x) * SIZE

    def Y(y):
        return PAD + (1 - float(y)) * SIZE

    out = _header(w, h, title)
    out.append(f'<text x="{PAD}" y="{PAD - 10}" font-size="13" font-family="sans-serif">{_esc(title)}</text>')
    out.append(f'<rect x="{PAD}" y="{PAD}" width="{SIZE}" height="{SIZE}" fill="none" stroke="black"/>')
    for ps, fill, label in layers:
        out.append(f'<g fill="{fill}" fill-opacity="0.6" stroke="{fill}" stroke-width="0.5"><desc>{_esc(label)}</desc>')
        for poly in ps.pieces:
            pts = " ".join(f"{X(v[0]):.3f},{Y(v[1]):.3f}" for v in poly.vertices)
            out.append(f'<polygon points="{pts}"/>')
        out.append("</g>")
    y = PAD + SIZE + 18
    for k, (_, fill, label) in enumerate(layers):
        out.append(f'<rect x="{PAD + 130 * k}" y="{y - 10}" width="12" height="12" fill="{fill}"/>')
        out.append(f'<text x="{PAD + 130 * k + 16}" y="{y}" font-size="11" font-family="sans-serif">{_esc(label)}</text>')
    if caption:
        out.append(f'<text x="{PAD}" y="{y + 20}" font-size="9" font-family="monospace">{_esc(caption)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def strips_figure(
    directions: Sequence[tuple[float, float]],
    eps: float,
    basis: Optional[tuple[tuple[float, float], tuple[float, float]]],
    title: str,
    caption: str = "",
) -> str:
    """Strips ||<u, x>|| <= eps over one fundamental parallelogram (or a window if no period basis)."""
    if basis is None:
        basis = ((4.0, 0.0), (0.0, 4.0))
    (ax, ay), (bx, by) = basis
    corners = [(0.0, 0.0), (ax, ay), (ax + bx, ay + by), (bx, by)]
    xs = [c[0] for c in corners]
    ys = [c[1] for c in corners]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) or 1.0
    s = SIZE / span
    w, h = SIZE + 2 * PAD, SIZE + 2 * PAD + 30

    def X(x):
        return PAD + (x - x0) * s

    def Y(y):
        return PAD + (y1 - y) * s

    out = _header(w, h, title)
    out.append(f'<text x="{PAD}" y="{PAD - 10}" font-size="13" font-family="sans-serif">{_esc(title)}</text>')
    poly = " ".join(f"{X(cx):.3f},{Y(cy):.3f}" for cx, cy in corners)
    out.append(f'<defs><clipPath id="fd"><polygon points="{poly}"/></clipPath></defs>')
    palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]
    out.append('<g clip-path="url(#fd)">')
    diag = math.hypot(x1 - x0, y1 - y0)
    cxm, cym = (x0 + x1) / 2, (y0 + y1) / 2
    for idx, (c, sn) in enumerate(directions):
        color = palette[idx % len(palette)]
        t_c = c * cxm + sn * cym
        ks = range(math.floor(t_c - diag) - 1, math.ceil(t_c + diag) + 2)
        for k in ks:
            # band k - eps <= <u, x> <= k + eps as a long quadrilateral
            px, py = -sn, c
            pts = []
            for off, along in ((k - eps, -diag), (k - eps, diag), (k + eps, diag), (k + eps, -diag)):
                bx0 = c * off + px * (along + (px * cxm + py * cym))
                by0 = sn * off + py * (along + (px * cxm + py * cym))
                pts.append(f"{X(bx0):.3f},{Y(by0):.3f}")
            out.append(f'<polygon points="{" ".join(pts)}" fill="{color}" fill-opacity="0.25"/>')
    out.append("</g>")
    out.append(f'<polygon points="{poly}" fill="none" stroke="black"/>')
    if caption:
        out.append(f'<text x="{PAD}" y="{h - 10}" font-size="9" font-family="monospace">{_esc(caption)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def series_figure(xs: Sequence[float], series: Iterable[tuple[str, str, Sequence[Optional[float]]]], title: str, caption: str = "") -> str:
    """Simple line chart of one or more series against N."""
    w, h = SIZE + 2 * PAD + 60, SIZE // 2 + 2 * PAD + 40
    series = list(series)
    vals = [v for _, _, ys in series for v in ys if v is not None]
    ymin, ymax = 0.0, max(vals + [0.5])
    xmin, xmax = min(xs), max(xs)
    xr = (xmax - xmin) or 1.0
    plot_h = SIZE // 2

    def X(x):
        return PAD + 40 + (x - xmin) / xr * SIZE

    def Y(y):
        return PAD + (1 - (y - ymin) / (ymax - ymin)) * plot_h

    out = _header(w, h, title)
    out.append(f'<text x="{PAD}" y="{PAD - 10}" font-size="13" font-family="sans-serif">{_esc(title)}</text>')
    out.append(f'<line x1="{X(xmin)}" y1="{Y(0)}" x2="{X(xmax)}" y2="{Y(0)}" stroke="black"/>')
    out.append(f'<line x1="{X(xmin)}" y1="{Y(0)}" x2="{X(xmin)}" y2="{Y(ymax)}" stroke="black"/>')
    for yt in (0.0, 0.25, 1 / 3, 0.5):
        out.append(f'<text x="{PAD}" y="{Y(yt) + 4:.2f}" font-size="10" font-family="sans-serif">{yt:.3f}</text>')
    for x in xs:
        out.append(f'<text x="{X(x) - 6:.2f}" y="{Y(0) + 14:.2f}" font-size="10" font-family="sans-serif">{x:g}</text>')
    for k, (label, color, ys) in enumerate(series):
        pts = [(X(x), Y(y)) for x, y in zip(xs, ys) if y is not None]
        if len(pts) > 1:
            out.append('<polyline fill="none" stroke="{}" points="{}"/>'.format(color, " ".join(f"{a:.2f},{b:.2f}" for a, b in pts)))
        for a, b in pts:
            out.append(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="3" fill="{color}"/>')
        out.append(f'<text x="{X(xmax) + 8}" y="{PAD + 14 * (k + 1)}" font-size="11" fill="{color}" font-family="sans-serif">{_esc(label)}</text>')
    if caption:
        out.append(f'<text x="{PAD}" y="{h - 10}" font-size="9" font-family="monospace">{_esc(caption)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
