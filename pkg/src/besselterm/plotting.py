"""Minimal SVG line charts: axes, ticks, one polyline per series, text legend."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["Panel", "Series", "grid_svg", "line_chart_svg"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")
_W, _H = 480, 320
_MARGIN = (60, 20, 40, 50)  # left, right, top, bottom


@dataclass(frozen=True)
class Series:
    label: str
    x: tuple
    y: tuple


@dataclass(frozen=True)
class Panel:
    title: str
    xlabel: str
    ylabel: str
    series: tuple


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, count: int = 5):
    if hi <= lo:
        return [lo]
    return list(np.linspace(lo, hi, count))


def _bounds(values):
    lo, hi = float(min(values)), float(max(values))
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def _panel_body(panel: Panel, ox: float, oy: float) -> list[str]:
    left, right, top, bottom = _MARGIN
    pw, ph = _W - left - right, _H - top - bottom
    xs = [v for s in panel.series for v in s.x]
    ys = [v for s in panel.series for v in s.y]
    x0, x1 = _bounds(xs)
    y0, y1 = _bounds(ys)

    def sx(v):
        return ox + left + (v - x0) / (x1 - x0) * pw

    def sy(v):
        return oy + top + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<text x="{_fmt(ox + _W / 2)}" y="{_fmt(oy + 18)}" text-anchor="middle">{escape(panel.title)}</text>',
        f'<line x1="{_fmt(ox + left)}" y1="{_fmt(oy + top + ph)}" x2="{_fmt(ox + left + pw)}" '
        f'y2="{_fmt(oy + top + ph)}" stroke="black"/>',
        f'<line x1="{_fmt(ox + left)}" y1="{_fmt(oy + top)}" x2="{_fmt(ox + left)}" '
        f'y2="{_fmt(oy + top + ph)}" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{_fmt(sx(t))}" y1="{_fmt(oy + top + ph)}" x2="{_fmt(sx(t))}" '
                   f'y2="{_fmt(oy + top + ph + 5)}" stroke="black"/>')
        out.append(f'<text x="{_fmt(sx(t))}" y="{_fmt(oy + top + ph + 18)}" text-anchor="middle" '
                   f'font-size="10">{_fmt(t)}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{_fmt(ox + left - 5)}" y1="{_fmt(sy(t))}" x2="{_fmt(ox + left)}" '
                   f'y2="{_fmt(sy(t))}" stroke="black"/>')
        out.append(f'<text x="{_fmt(ox + left - 8)}" y="{_fmt(sy(t) + 3)}" text-anchor="end" '
                   f'font-size="10">{_fmt(t)}</text>')
    out.append(f'<text x="{_fmt(ox + left + pw / 2)}" y="{_fmt(oy + _H - 8)}" text-anchor="middle" '
               f'font-size="11">{escape(panel.xlabel)}</text>')
    out.append(f'<text x="{_fmt(ox + 14)}" y="{_fmt(oy + top + ph / 2)}" text-anchor="middle" font-size="11" '
               f'transform="rotate(-90 {_fmt(ox + 14)} {_fmt(oy + top + ph / 2)})">{escape(panel.ylabel)}</text>')
    for i, s in enumerate(panel.series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{_fmt(sx(a))},{_fmt(sy(b))}" for a, b in zip(s.x, s.y))
        out.append(f'<polyline fill="none" stroke="{color}" points="{pts}"/>')
        out.append(f'<text x="{_fmt(ox + left + pw - 4)}" y="{_fmt(oy + top + 12 + 14 * i)}" text-anchor="end" '
                   f'font-size="10" fill="{color}">{escape(s.label)}</text>')
    return out


def grid_svg(panels, columns: int = 2) -> str:
    """Lay out panels row by row in a single SVG document."""
    panels = list(panels)
    if not panels:
        raise ValueError("at least one panel is required")
    columns = min(columns, len(panels))
    rows = -(-len(panels) // columns)
    body = []
    for k, panel in enumerate(panels):
        body.extend(_panel_body(panel, (k % columns) * _W, (k // columns) * _H))
    width, height = columns * _W, rows * _H
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
        *body,
        "</svg>",
        "",
    ])


def line_chart_svg(title: str, xlabel: str, ylabel: str, series) -> str:
    return grid_svg([Panel(title, xlabel, ylabel, tuple(series))], columns=1)
