"""Minimal PDF 1.4 writer: text flow plus vector chart primitives.

No external engine: pages are Letter-size, content streams are written
uncompressed, text uses the built-in Helvetica fonts. Enough for an
article-like story document; not a general typesetter.
"""

from __future__ import annotations

import re

from ..evaluate import (
    CardPayload,
    GeoSetPayload,
    RenderPayload,
    SeriesPayload,
    TypedTablePayload,
)
from ..story import Story
from .tabular import format_value

PAGE_W = 612.0
PAGE_H = 792.0
MARGIN = 72.0
BODY_W = PAGE_W - 2 * MARGIN

FONT_BODY = "F1"       # Helvetica
FONT_BOLD = "F2"       # Helvetica-Bold

TABLE_ROW_CAP = 50

_TAG_RE = re.compile(r"<[^>]+>")
_WS_RE = re.compile(r"\s+")


def strip_html(markup: str) -> str:
    """Curated text for the PDF: tags dropped, entities resolved."""
    import html as _html

    text = _TAG_RE.sub(" ", markup)
    return _WS_RE.sub(" ", _html.unescape(text)).strip()


def _pdf_escape(text: str) -> str:
    # Standard fonts are Latin-1; anything else degrades to '?'.
    encoded = text.encode("latin-1", errors="replace").decode("latin-1")
    return encoded.replace("\\", r"\\").replace("(", r"\(").replace(")", r"\)")


def _hex_rgb(color: str) -> tuple[float, float, float]:
    return tuple(int(color[i : i + 2], 16) / 255.0 for i in (1, 3, 5))


def _text_width(text: str, size: float) -> float:
    # Helvetica average glyph width approximation; used only for wrapping.
    return len(text) * size * 0.5


def _wrap(text: str, size: float, width: float) -> list[str]:
    words = text.split()
    lines: list[str] = []
    current = ""
    for word in words:
        candidate = f"{current} {word}".strip()
        if current and _text_width(candidate, size) > width:
            lines.append(current)
            current = word
        else:
            current = candidate
    if current:
        lines.append(current)
    return lines or [""]


class _PdfCanvas:
    """Cursor-based layout over a list of per-page content streams."""

    def __init__(self):
        self.pages: list[list[str]] = []
        self.y = 0.0
        self._new_page()

    def _new_page(self):
        self.pages.append([])
        self.y = PAGE_H - MARGIN

    def _ops(self) -> list[str]:
        return self.pages[-1]

    def need(self, height: float):
        if self.y - height < MARGIN:
            self._new_page()

    def gap(self, height: float):
        self.y -= height

    def text_line(self, text: str, *, size: float = 11.0, font: str = FONT_BODY,
                  indent: float = 0.0):
        self.need(size * 1.4)
        self.y -= size * 1.2
        self._ops().append(
            f"BT /{font} {size:g} Tf {MARGIN + indent:g} {self.y:g} Td "
            f"({_pdf_escape(text)}) Tj ET"
        )

    def paragraph(self, text: str, *, size: float = 11.0, font: str = FONT_BODY):
        for line in _wrap(text, size, BODY_W):
            self.text_line(line, size=size, font=font)
        self.gap(size * 0.5)

    def rect(self, x, y, w, h, color: str):
        r, g, b = _hex_rgb(color)
        self._ops().append(f"{r:.3f} {g:.3f} {b:.3f} rg {x:g} {y:g} {w:g} {h:g} re f")

    def polyline(self, points: list[tuple[float, float]], color: str):
        if len(points) < 2:
            return
        r, g, b = _hex_rgb(color)
        ops = [f"{r:.3f} {g:.3f} {b:.3f} RG 1.5 w {points[0][0]:g} {points[0][1]:g} m"]
        ops += [f"{x:g} {y:g} l" for x, y in points[1:]]
        self._ops().append(" ".join(ops) + " S")

    def dot(self, x, y, radius, color: str):
        k = 0.5523 * radius
        r, g, b = _hex_rgb(color)
        self._ops().append(
            f"{r:.3f} {g:.3f} {b:.3f} rg "
            f"{x - radius:g} {y:g} m "
            f"{x - radius:g} {y + k:g} {x - k:g} {y + radius:g} {x:g} {y + radius:g} c "
            f"{x + k:g} {y + radius:g} {x + radius:g} {y + k:g} {x + radius:g} {y:g} c "
            f"{x + radius:g} {y - k:g} {x + k:g} {y - radius:g} {x:g} {y - radius:g} c "
            f"{x - k:g} {y - radius:g} {x - radius:g} {y - k:g} {x - radius:g} {y:g} c f"
        )

    def build(self) -> bytes:
        # Objects: 1 catalog, 2 pages, 3..n+2 page objs, then content
        # streams, then the two fonts.
        n = len(self.pages)
        font1_id = 3 + 2 * n
        font2_id = font1_id + 1
        objects: list[bytes] = []
        objects.append(b"<< /Type /Catalog /Pages 2 0 R >>")
        kids = " ".join(f"{3 + i} 0 R" for i in range(n))
        objects.append(f"<< /Type /Pages /Kids [{kids}] /Count {n} >>".encode())
        for i in range(n):
            objects.append(
                f"<< /Type /Page /Parent 2 0 R /MediaBox [0 0 {PAGE_W:g} {PAGE_H:g}] "
                f"/Resources << /Font << /{FONT_BODY} {font1_id} 0 R "
                f"/{FONT_BOLD} {font2_id} 0 R >> >> "
                f"/Contents {3 + n + i} 0 R >>".encode()
            )
        for page in self.pages:
            stream = "\n".join(page).encode("latin-1", errors="replace")
            objects.append(
                b"<< /Length %d >>\nstream\n%s\nendstream" % (len(stream), stream)
            )
        objects.append(b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>")
        objects.append(b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica-Bold >>")

        out = bytearray(b"%PDF-1.4\n")
        offsets = [0]
        for i, obj in enumerate(objects, start=1):
            offsets.append(len(out))
            out += b"%d 0 obj\n%s\nendobj\n" % (i, obj)
        xref_at = len(out)
        out += b"xref\n0 %d\n" % (len(objects) + 1)
        out += b"0000000000 65535 f \n"
        for off in offsets[1:]:
            out += b"%010d 00000 n \n" % off
        out += (
            b"trailer\n<< /Size %d /Root 1 0 R >>\nstartxref\n%d\n%%%%EOF\n"
            % (len(objects) + 1, xref_at)
        )
        return bytes(out)


def _chart(canvas: _PdfCanvas, payload: SeriesPayload, palette) -> None:
    height = 150.0
    canvas.need(height + 30)
    canvas.gap(height + 10)
    base = canvas.y
    palette = palette or ("#4E79A7",)
    low = min(0.0, min(payload.values))
    high = max(0.0, max(payload.values))
    if high == low:
        high = low + 1.0

    def scale_y(value):
        return base + (value - low) / (high - low) * height

    n = len(payload.values)
    if payload.chart_kind == "bar":
        slot = BODY_W / n
        for i, value in enumerate(payload.values):
            y0, y1 = sorted((scale_y(0.0), scale_y(value)))
            canvas.rect(MARGIN + i * slot + slot * 0.15, y0, slot * 0.7, y1 - y0,
                        palette[i % len(palette)])
    elif payload.chart_kind == "doughnut":
        # proportion bar: one segment per datum
        total = sum(payload.values) or 1.0
        x = MARGIN
        for i, value in enumerate(payload.values):
            w = BODY_W * value / total
            canvas.rect(x, base + height / 3, w, height / 3, palette[i % len(palette)])
            x += w
    elif payload.chart_kind == "line":
        step = BODY_W / max(n - 1, 1)
        points = [(MARGIN + i * step, scale_y(v)) for i, v in enumerate(payload.values)]
        canvas.polyline(points, palette[0])
    else:  # scatter
        xs = []
        for label in payload.labels:
            try:
                xs.append(float(label))
            except ValueError:
                xs.append(0.0)
        x_low, x_high = min(xs), max(xs)
        if x_high == x_low:
            x_high = x_low + 1.0
        for i, (x_val, value) in enumerate(zip(xs, payload.values)):
            x = MARGIN + (x_val - x_low) / (x_high - x_low) * BODY_W
            canvas.dot(x, scale_y(value), 3.0, palette[i % len(palette)])
    canvas.gap(6)
    legend = ", ".join(
        f"{label}: {format_value(value)}"
        for label, value in list(zip(payload.labels, payload.values))[:8]
    )
    if len(payload.values) > 8:
        legend += ", ..."
    canvas.text_line(legend, size=9)


def render_story_pdf(
    story: Story, payloads: dict[str, RenderPayload], *, title_suffix: str = ""
) -> bytes:
    """Story as a PDF document: title, curated text, counters as
    "label: value" lines, tables capped at 50 rows, charts as vector
    primitives, maps summarized as point count plus facet list."""
    canvas = _PdfCanvas()
    canvas.paragraph(story.title + title_suffix, size=20, font=FONT_BOLD)
    if story.subtitle:
        canvas.paragraph(story.subtitle, size=14)
    if story.description:
        canvas.paragraph(story.description, size=11)
    canvas.gap(8)

    for comp in story.components:
        payload = payloads.get(comp.id)
        if comp.type == "text":
            text = strip_html(comp.html)
            if text:
                canvas.paragraph(text)
            continue
        title = getattr(comp, "title", "") or getattr(comp, "label", "")
        if title:
            canvas.paragraph(title, size=13, font=FONT_BOLD)
        if isinstance(payload, CardPayload):
            canvas.text_line(f"{payload.label}: {format_value(payload.value)}", size=12)
            canvas.gap(6)
        elif isinstance(payload, SeriesPayload):
            _chart(canvas, payload, story.palette)
            canvas.gap(6)
        elif isinstance(payload, TypedTablePayload):
            canvas.text_line(" | ".join(payload.vars), size=10, font=FONT_BOLD)
            for row in payload.rows[:TABLE_ROW_CAP]:
                cells = [row[v].raw.value if v in row else "" for v in payload.vars]
                canvas.text_line(" | ".join(cells)[:110], size=9)
            if len(payload.rows) > TABLE_ROW_CAP:
                canvas.text_line(
                    f"... {len(payload.rows) - TABLE_ROW_CAP} more rows", size=9
                )
            canvas.gap(6)
        elif isinstance(payload, GeoSetPayload):
            canvas.text_line(f"Map with {len(payload.points)} located points", size=11)
            for var, values in payload.facets.items():
                shown = ", ".join(values[:10])
                canvas.text_line(f"filter {var}: {shown}", size=9, indent=12)
            canvas.gap(6)
        elif comp.type in ("text_search", "action"):
            canvas.text_line(
                f"[interactive {comp.type.replace('_', ' ')}: available in the web version]",
                size=9,
            )
            canvas.gap(4)
    return canvas.build()
