"""Dependency-free SVG scatter plots of 2-D embeddings."""
from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .errors import DataError

WIDTH, HEIGHT = 640, 520
PAD_LEFT, PAD_RIGHT, PAD_TOP, PAD_BOTTOM = 60, 130, 40, 50
MARKER = 4.0

# classes 0 and 1 are fixed; others cycle this palette and the glyph list
PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896",
    "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5",
]
GLYPHS = ["square", "triangle", "diamond", "plus", "triangle-down", "circle", "cross"]


def style_for(label: int) -> tuple[str, str]:
    if label == 0:
        return "circle", "blue"
    if label == 1:
        return "cross", "red"
    k = label - 2
    return GLYPHS[k % len(GLYPHS)], PALETTE[k % len(PALETTE)]


def _f(x: float) -> str:
    return f"{x:.3f}"


def marker(glyph: str, x: float, y: float, color: str, r: float = MARKER) -> str:
    stroke = f'fill="none" stroke="{color}" stroke-width="1.2"'
    if glyph == "circle":
        return f'<circle class="marker" cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}" {stroke}/>'
    if glyph == "cross":
        d = (f"M{_f(x - r)},{_f(y - r)}L{_f(x + r)},{_f(y + r)}"
             f"M{_f(x - r)},{_f(y + r)}L{_f(x + r)},{_f(y - r)}")
    elif glyph == "plus":
        d = f"M{_f(x - r)},{_f(y)}L{_f(x + r)},{_f(y)}M{_f(x)},{_f(y - r)}L{_f(x)},{_f(y + r)}"
    elif glyph == "square":
        d = (f"M{_f(x - r)},{_f(y - r)}L{_f(x + r)},{_f(y - r)}"
             f"L{_f(x + r)},{_f(y + r)}L{_f(x - r)},{_f(y + r)}Z")
    elif glyph == "triangle":
        d = f"M{_f(x)},{_f(y - r)}L{_f(x + r)},{_f(y + r)}L{_f(x - r)},{_f(y + r)}Z"
    elif glyph == "triangle-down":
        d = f"M{_f(x)},{_f(y + r)}L{_f(x + r)},{_f(y - r)}L{_f(x - r)},{_f(y - r)}Z"
    elif glyph == "diamond":
        d = f"M{_f(x)},{_f(y - r)}L{_f(x + r)},{_f(y)}L{_f(x)},{_f(y + r)}L{_f(x - r)},{_f(y)}Z"
    else:
        raise ValueError(f"unknown glyph {glyph!r}")
    return f'<path class="marker" d="{d}" {stroke}/>'


def _axis_range(v: np.ndarray) -> tuple[float, float]:
    lo, hi = float(v.min()), float(v.max())
    span = hi - lo
    if span == 0:
        return lo - 0.5, hi + 0.5
    return lo - 0.05 * span, hi + 0.05 * span


def scatter_svg(coords, labels=None, title: str = "") -> str:
    """Render an ``n x 2`` embedding; one ``class="marker"`` element per point."""
    y = np.asarray(coords, dtype=np.float64)
    if y.ndim != 2 or y.shape[1] != 2:
        raise DataError(f"plotting needs a 2-D embedding, got {y.shape[1] if y.ndim == 2 else y.ndim} dimensions")
    lab = np.zeros(y.shape[0], dtype=np.int64) if labels is None else np.asarray(labels).astype(np.int64)
    x0, x1 = _axis_range(y[:, 0])
    y0, y1 = _axis_range(y[:, 1])
    pw = WIDTH - PAD_LEFT - PAD_RIGHT
    ph = HEIGHT - PAD_TOP - PAD_BOTTOM
    px = PAD_LEFT + (y[:, 0] - x0) / (x1 - x0) * pw
    py = PAD_TOP + (1.0 - (y[:, 1] - y0) / (y1 - y0)) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{PAD_LEFT}" y="{PAD_TOP}" width="{pw}" height="{ph}" fill="none" '
        f'stroke="black" stroke-width="1"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="15">{escape(title)}</text>')
    text = 'font-family="sans-serif" font-size="11"'
    bottom = PAD_TOP + ph
    out += [
        f'<text x="{PAD_LEFT}" y="{bottom + 16}" {text}>{x0:.4g}</text>',
        f'<text x="{PAD_LEFT + pw}" y="{bottom + 16}" text-anchor="end" {text}>{x1:.4g}</text>',
        f'<text x="{PAD_LEFT - 6}" y="{bottom}" text-anchor="end" {text}>{y0:.4g}</text>',
        f'<text x="{PAD_LEFT - 6}" y="{PAD_TOP + 10}" text-anchor="end" {text}>{y1:.4g}</text>',
        f'<text x="{PAD_LEFT + pw / 2:.1f}" y="{bottom + 36}" text-anchor="middle" {text}>dim0</text>',
        f'<text x="{PAD_LEFT - 40}" y="{PAD_TOP + ph / 2:.1f}" text-anchor="middle" {text} '
        f'transform="rotate(-90 {PAD_LEFT - 40} {PAD_TOP + ph / 2:.1f})">dim1</text>',
    ]
    out.append('<g id="points">')
    for i in range(y.shape[0]):
        glyph, color = style_for(int(lab[i]))
        out.append(marker(glyph, px[i], py[i], color))
    out.append("</g>")
    if labels is not None:
        out.append('<g id="legend">')
        lx = WIDTH - PAD_RIGHT + 20
        for row, cls in enumerate(np.unique(lab).tolist()[:30]):
            ly = PAD_TOP + 12 + 16 * row
            glyph, color = style_for(cls)
            out.append(marker(glyph, lx, ly, color).replace('class="marker"', 'class="legend-key"'))
            out.append(f'<text x="{lx + 10}" y="{ly + 4}" {text}>class {cls}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
