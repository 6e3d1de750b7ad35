"""SVG chart rendering: bar, line, scatter, doughnut from a series payload.

Element contract (tested): bar emits one rect per datum, line one polyline,
scatter one circle per datum, doughnut one arc path per datum with sweep
angles proportional to the values.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape, quoteattr

from ..evaluate import SeriesPayload

WIDTH = 640
HEIGHT = 360
MARGIN_LEFT = 56
MARGIN_RIGHT = 20
MARGIN_TOP = 48
MARGIN_BOTTOM = 44

FALLBACK_COLOR = "#4E79A7"


class EmptySeries(ValueError):
    pass


def _color(palette, i: int) -> str:
    if not palette:
        return FALLBACK_COLOR
    return palette[i % len(palette)]


def _fmt(value: float) -> str:
    return f"{value:.3f}".rstrip("0").rstrip(".")


def _fmtp(value: float) -> str:
    """Full-precision coordinate (doughnut angles are checked to 1e-9)."""
    return repr(float(value))


def export_component_svg(
    payload: SeriesPayload, kind: str, palette: tuple[str, ...],
    *, title: str = "",
) -> bytes:
    """Render a series as a standalone SVG 1.1 document."""
    if not payload.values:
        raise EmptySeries("cannot render an empty series")
    if kind == "doughnut":
        body = _doughnut(payload, palette)
    elif kind == "line":
        body = _line(payload, palette)
    elif kind == "scatter":
        body = _scatter(payload, palette)
    elif kind == "bar":
        body = _bar(payload, palette)
    else:
        raise ValueError(f"unknown chart kind {kind!r}")

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16" font-weight="bold">{escape(title)}</text>',
        body,
        "</svg>",
    ]
    return "\n".join(parts).encode("utf-8")


def _plot_box():
    x0 = MARGIN_LEFT
    y0 = MARGIN_TOP
    return x0, y0, WIDTH - MARGIN_RIGHT - x0, HEIGHT - MARGIN_BOTTOM - y0


def _value_scale(values) -> tuple[float, float]:
    low = min(0.0, min(values))
    high = max(0.0, max(values))
    if high == low:
        high = low + 1.0
    return low, high


def _axes(x0, y0, w, h) -> str:
    return (
        f'<line x1="{x0}" y1="{y0 + h}" x2="{x0 + w}" y2="{y0 + h}" stroke="#444"/>'
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y0 + h}" stroke="#444"/>'
    )


def _bar(payload: SeriesPayload, palette) -> str:
    x0, y0, w, h = _plot_box()
    low, high = _value_scale(payload.values)
    n = len(payload.values)
    slot = w / n
    bar_w = slot * 0.7
    out = [_axes(x0, y0, w, h)]
    zero_y = y0 + h - (0 - low) / (high - low) * h
    for i, (label, value) in enumerate(zip(payload.labels, payload.values)):
        x = x0 + i * slot + (slot - bar_w) / 2
        top = y0 + h - (value - low) / (high - low) * h
        y, bh = (top, zero_y - top) if value >= 0 else (zero_y, top - zero_y)
        out.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(bar_w)}" '
            f'height="{_fmt(bh)}" fill={quoteattr(_color(palette, i))}>'
            f"<title>{escape(label)}: {_fmt(value)}</title></rect>"
        )
        out.append(
            f'<text x="{_fmt(x + bar_w / 2)}" y="{y0 + h + 16}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{escape(label[:16])}</text>'
        )
    return "".join(out)


def _line(payload: SeriesPayload, palette) -> str:
    x0, y0, w, h = _plot_box()
    low, high = _value_scale(payload.values)
    n = len(payload.values)
    step = w / max(n - 1, 1)
    points = []
    for i, value in enumerate(payload.values):
        x = x0 + i * step
        y = y0 + h - (value - low) / (high - low) * h
        points.append(f"{_fmt(x)},{_fmt(y)}")
    return (
        _axes(x0, y0, w, h)
        + f'<polyline points="{" ".join(points)}" fill="none" '
        f'stroke={quoteattr(_color(palette, 0))} stroke-width="2"/>'
    )


def _scatter(payload: SeriesPayload, palette) -> str:
    x0, y0, w, h = _plot_box()
    xs = [float(label) for label in payload.labels]
    x_low, x_high = min(xs), max(xs)
    if x_high == x_low:
        x_high = x_low + 1.0
    low, high = _value_scale(payload.values)
    out = [_axes(x0, y0, w, h)]
    for i, (x_val, value) in enumerate(zip(xs, payload.values)):
        cx = x0 + (x_val - x_low) / (x_high - x_low) * w
        cy = y0 + h - (value - low) / (high - low) * h
        out.append(
            f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" '
            f"fill={quoteattr(_color(palette, i))}>"
            f"<title>{_fmt(x_val)}, {_fmt(value)}</title></circle>"
        )
    return "".join(out)


def _doughnut(payload: SeriesPayload, palette) -> str:
    total = sum(payload.values)
    if total <= 0:
        raise EmptySeries("doughnut requires a positive value total")
    cx, cy = WIDTH / 2, (HEIGHT + MARGIN_TOP) / 2
    outer = min(WIDTH, HEIGHT - MARGIN_TOP) / 2 - 24
    inner = outer * 0.55
    out = []
    angle = -90.0  # start at 12 o'clock, sweep clockwise
    for i, (label, value) in enumerate(zip(payload.labels, payload.values)):
        sweep = 360.0 * value / total
        out.append(
            f'<path d="{_annular_sector(cx, cy, inner, outer, angle, sweep)}" '
            f"fill={quoteattr(_color(palette, i))}>"
            f"<title>{escape(label)}: {_fmt(value)}</title></path>"
        )
        angle += sweep
    return "".join(out)


def _polar(cx, cy, radius, angle_deg):
    rad = math.radians(angle_deg)
    return cx + radius * math.cos(rad), cy + radius * math.sin(rad)


def _annular_sector(cx, cy, inner, outer, start_deg, sweep_deg) -> str:
    """One doughnut segment as a closed path of two arcs.

    Sweeps of 360 degrees are split into two half arcs because a single
    SVG arc cannot describe a full circle.
    """
    halves = []
    if sweep_deg >= 360.0 - 1e-9:
        halves = [(start_deg, 180.0), (start_deg + 180.0, sweep_deg - 180.0)]
    else:
        halves = [(start_deg, sweep_deg)]

    def arc(radius, a0, a1, clockwise):
        x, y = _polar(cx, cy, radius, a1)
        large = 1 if abs(a1 - a0) > 180.0 else 0
        return f"A {_fmtp(radius)} {_fmtp(radius)} 0 {large} {1 if clockwise else 0} {_fmtp(x)} {_fmtp(y)}"

    start, _ = halves[0]
    sx, sy = _polar(cx, cy, outer, start)
    parts = [f"M {_fmtp(sx)} {_fmtp(sy)}"]
    for a0, sw in halves:
        parts.append(arc(outer, a0, a0 + sw, clockwise=True))
    end = halves[-1][0] + halves[-1][1]
    ix, iy = _polar(cx, cy, inner, end)
    parts.append(f"L {_fmtp(ix)} {_fmtp(iy)}")
    for a0, sw in reversed(halves):
        parts.append(arc(inner, a0 + sw, a0, clockwise=False))
    parts.append("Z")
    return " ".join(parts)
