"""Deterministic SVG convergence plots.

Single panel, x = iteration, y = best-so-far. The y axis goes logarithmic
when every plotted value is positive, linear otherwise. Output is plain
SVG 1.1 text with fixed formatting, so the same trace always renders to
the same bytes.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from swarmbench.core import InvalidTraceError

WIDTH = 720
HEIGHT = 440
MARGIN_LEFT = 80
MARGIN_RIGHT = 24
MARGIN_TOP = 46
MARGIN_BOTTOM = 54


def _fmt(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:.6g}"


def _ticks(lo, hi, count=5):
    if count < 2:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + step * i for i in range(count)]


def render_convergence_svg(trace):
    if not trace.records:
        raise InvalidTraceError("cannot plot an empty trace")

    xs = [rec.iteration for rec in trace.records]
    ys = [rec.best for rec in trace.records]
    log_scale = all(y > 0.0 for y in ys)

    x_lo, x_hi = float(xs[0]), float(xs[-1])
    if x_hi == x_lo:
        x_lo -= 0.5
        x_hi += 0.5
    plot_ys = [math.log10(y) for y in ys] if log_scale else list(ys)
    y_lo = min(plot_ys)
    y_hi = max(plot_ys)
    if y_hi == y_lo:
        pad = 1.0 if log_scale else max(1.0, abs(y_hi) * 0.1)
        y_lo -= pad
        y_hi += pad

    inner_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    inner_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x):
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * inner_w

    def py(y):
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * inner_h

    title = f"{trace.header.problem} ({trace.header.algorithm})"
    y_name = "best so far (log scale)" if log_scale else "best so far"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(title)}</text>',
    ]

    axis_color = "#444444"
    grid_color = "#dddddd"

    for ty in _ticks(y_lo, y_hi):
        y = py(ty)
        label = _label(10.0 ** ty) if log_scale else _label(ty)
        parts.append(f'<line x1="{MARGIN_LEFT}" y1="{_fmt(y)}" '
                     f'x2="{WIDTH - MARGIN_RIGHT}" y2="{_fmt(y)}" '
                     f'stroke="{grid_color}"/>')
        parts.append(f'<text x="{MARGIN_LEFT - 8}" y="{_fmt(y + 4)}" '
                     f'text-anchor="end" font-family="sans-serif" '
                     f'font-size="11">{escape(label)}</text>')
    for tx in _ticks(x_lo, x_hi):
        x = px(tx)
        parts.append(f'<line x1="{_fmt(x)}" y1="{MARGIN_TOP}" '
                     f'x2="{_fmt(x)}" y2="{HEIGHT - MARGIN_BOTTOM}" '
                     f'stroke="{grid_color}"/>')
        parts.append(f'<text x="{_fmt(x)}" y="{HEIGHT - MARGIN_BOTTOM + 18}" '
                     f'text-anchor="middle" font-family="sans-serif" '
                     f'font-size="11">{escape(_label(tx))}</text>')

    parts.append(f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" '
                 f'width="{inner_w}" height="{inner_h}" fill="none" '
                 f'stroke="{axis_color}"/>')
    parts.append(f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 16}" '
                 f'text-anchor="middle" font-family="sans-serif" '
                 f'font-size="12">iteration</text>')
    parts.append(f'<text x="20" y="{HEIGHT / 2:.1f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="12" '
                 f'transform="rotate(-90 20 {HEIGHT / 2:.1f})">'
                 f'{escape(y_name)}</text>')

    points = [(px(float(x)), py(y)) for x, y in zip(xs, plot_ys)]
    if len(points) == 1:
        x, y = points[0]
        parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="4" '
                     f'fill="#1f6fb2"/>')
    else:
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
        parts.append(f'<polyline points="{coords}" fill="none" '
                     f'stroke="#1f6fb2" stroke-width="1.5"/>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def save_convergence_svg(trace, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_convergence_svg(trace))
