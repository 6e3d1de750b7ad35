"""Self-contained HTML export: one document, inline styles, no external
script or style dependencies. Components appear in story order, each
wrapped in an element carrying its id and a data-type attribute, with the
underlying query available in a collapsed block."""

from __future__ import annotations

import html as _html
import json

from ..celltypes import VIDEO_HOST_RE
from ..evaluate import (
    CardPayload,
    GeoSetPayload,
    RenderPayload,
    SeriesPayload,
    TypedTablePayload,
    payload_to_doc,
)
from ..story import Story, UnknownComponent
from .sanitize import sanitize_html
from .svg import EmptySeries, export_component_svg
from .tabular import format_value

_STYLE = """
body { font-family: Georgia, 'Times New Roman', serif; margin: 0; color: #1d2129;
       background: #fafaf7; }
main { max-width: 760px; margin: 0 auto; padding: 1rem 1.5rem 4rem; }
header.story-header { max-width: 760px; margin: 0 auto; padding: 3rem 1.5rem 0; }
header.story-header h1 { font-size: 2.2rem; margin-bottom: 0.3rem; }
.subtitle { color: #555; font-size: 1.2rem; margin-top: 0; }
.component { margin: 2rem 0; }
.card { display: inline-block; border: 1px solid #ddd; border-radius: 10px;
        padding: 1rem 2rem; background: #fff; text-align: center; }
.card-value { display: block; font-size: 2.4rem; font-weight: bold; }
.card-label { color: #666; }
table.results { border-collapse: collapse; width: 100%; background: #fff;
                font-family: sans-serif; font-size: 0.9rem; }
table.results th, table.results td { border: 1px solid #e0e0e0; padding: 0.4rem 0.6rem;
                                     text-align: left; }
table.results th { background: #f0f0ea; }
details.query { margin-top: 0.5rem; font-family: sans-serif; font-size: 0.85rem; }
details.query pre { background: #f4f4ef; border: 1px solid #e2e2da; padding: 0.6rem;
                    overflow-x: auto; }
.facets { font-family: sans-serif; font-size: 0.85rem; }
.facets .facet-value { display: inline-block; background: #eef; border-radius: 8px;
                       padding: 0 0.5rem; margin: 0 0.2rem 0.2rem 0; }
.dropped-note { color: #885; font-size: 0.8rem; font-family: sans-serif; }
.component img { max-width: 100%; }
"""

# Live mode: the exported page re-queries the endpoint when opened.
_LIVE_SCRIPT = """
(function () {
  var ACCEPT = 'application/sparql-results+json';
  function query(endpoint, text) {
    var url = endpoint + (endpoint.indexOf('?') < 0 ? '?' : '&') +
      'query=' + encodeURIComponent(text);
    return fetch(url, { headers: { Accept: ACCEPT } }).then(function (resp) {
      if (!resp.ok) throw new Error('endpoint returned HTTP ' + resp.status);
      return resp.json();
    });
  }
  function cellText(term) { return term ? term.value : ''; }
  function renderTable(el, data) {
    var table = document.createElement('table');
    table.className = 'results';
    var head = table.insertRow();
    data.head.vars.forEach(function (v) {
      var th = document.createElement('th'); th.textContent = v; head.appendChild(th);
    });
    data.results.bindings.forEach(function (b) {
      var tr = table.insertRow();
      data.head.vars.forEach(function (v) {
        tr.insertCell().textContent = cellText(b[v]);
      });
    });
    el.appendChild(table);
  }
  function renderCounter(el, data, label) {
    var vars = data.head.vars, rows = data.results.bindings;
    var value = rows.length && vars.length ? cellText(rows[0][vars[0]]) : 'n/a';
    el.innerHTML = '<div class="card"><span class="card-value"></span>' +
      '<span class="card-label"></span></div>';
    el.querySelector('.card-value').textContent = value;
    el.querySelector('.card-label').textContent = label;
  }
  function renderChart(el, data, palette) {
    var rows = data.results.bindings, w = 640, h = 300, pad = 40;
    var labels = [], values = [];
    rows.forEach(function (b) {
      if (b.label && b.value && isFinite(parseFloat(b.value.value))) {
        labels.push(b.label.value); values.push(parseFloat(b.value.value));
      }
    });
    if (!values.length) { el.textContent = 'no chartable rows'; return; }
    var max = Math.max.apply(null, values.concat([1]));
    var ns = 'http://www.w3.org/2000/svg';
    var svg = document.createElementNS(ns, 'svg');
    svg.setAttribute('width', w); svg.setAttribute('height', h);
    var slot = (w - 2 * pad) / values.length;
    values.forEach(function (v, i) {
      var bar = document.createElementNS(ns, 'rect');
      var bh = (h - 2 * pad) * v / max;
      bar.setAttribute('x', pad + i * slot + slot * 0.15);
      bar.setAttribute('y', h - pad - bh);
      bar.setAttribute('width', slot * 0.7); bar.setAttribute('height', bh);
      bar.setAttribute('fill', palette[i % palette.length] || '#4E79A7');
      var t = document.createElementNS(ns, 'title');
      t.textContent = labels[i] + ': ' + v;
      bar.appendChild(t); svg.appendChild(bar);
    });
    el.appendChild(svg);
  }
  function renderMap(el, data) {
    var rows = data.results.bindings;
    var located = rows.filter(function (b) { return b.lat && b.long; });
    var note = document.createElement('p');
    note.textContent = located.length + ' located points';
    el.appendChild(note);
    renderTable(el, data);
  }
  document.querySelectorAll('[data-query]').forEach(function (el) {
    var endpoint = document.body.getAttribute('data-endpoint');
    var target = el.querySelector('.live-target');
    query(endpoint, el.getAttribute('data-query')).then(function (data) {
      var type = el.getAttribute('data-type');
      if (type === 'counter') renderCounter(target, data, el.getAttribute('data-label') || '');
      else if (type === 'chart') renderChart(target, data, window.STORY_PALETTE || []);
      else if (type === 'map') renderMap(target, data);
      else renderTable(target, data);
    }).catch(function (err) {
      target.textContent = 'query failed: ' + err.message;
    });
  });
})();
"""


def _esc(text: str) -> str:
    return _html.escape(text, quote=True)


def render_card_html(payload: CardPayload) -> str:
    return (
        '<div class="card">'
        f'<span class="card-value">{_esc(format_value(payload.value))}</span>'
        f'<span class="card-label">{_esc(payload.label)}</span></div>'
    )


def _cell_html(cell) -> str:
    render = cell.render
    if render.kind == "number":
        return _esc(format_value(render.value))
    if render.kind == "audio":
        return f'<audio controls src="{_esc(render.url)}"></audio>'
    if render.kind == "video":
        # hosted-player pages cannot feed a <video> element; link them
        if VIDEO_HOST_RE.match(render.url):
            return f'<a href="{_esc(render.url)}">{_esc(render.url)}</a>'
        return f'<video controls width="320" src="{_esc(render.url)}"></video>'
    if render.kind == "image":
        return f'<img src="{_esc(render.url)}" alt="{_esc(cell.raw.value)}"/>'
    if render.kind == "link":
        return f'<a href="{_esc(render.url)}">{_esc(render.url)}</a>'
    return _esc(cell.raw.value)


def render_table_html(payload: TypedTablePayload) -> str:
    head = "".join(f"<th>{_esc(v)}</th>" for v in payload.vars)
    body = []
    for row in payload.rows:
        cells = "".join(
            f"<td>{_cell_html(row[v]) if v in row else ''}</td>" for v in payload.vars
        )
        body.append(f"<tr>{cells}</tr>")
    return (
        f'<table class="results"><thead><tr>{head}</tr></thead>'
        f'<tbody>{"".join(body)}</tbody></table>'
    )


def render_geo_html(payload: GeoSetPayload) -> str:
    """Static map substitute: an SVG plot of the point set plus facets."""
    parts = []
    if payload.points:
        lats = [p.lat for p in payload.points]
        lons = [p.lon for p in payload.points]
        lat0, lat1 = min(lats) - 0.05, max(lats) + 0.05
        lon0, lon1 = min(lons) - 0.05, max(lons) + 0.05
        w, h = 640, 360
        dots = []
        for p in payload.points:
            x = (p.lon - lon0) / (lon1 - lon0 or 1.0) * (w - 40) + 20
            y = h - 20 - (p.lat - lat0) / (lat1 - lat0 or 1.0) * (h - 40)
            name = p.metadata.get("name")
            tip = _esc(name.value if name else f"{p.lat}, {p.lon}")
            dots.append(
                f'<circle cx="{x:.1f}" cy="{y:.1f}" r="5" fill="#E15759" '
                f'fill-opacity="0.8"><title>{tip}</title></circle>'
            )
        parts.append(
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}" style="background:#eef3f6;border:1px solid #dde">'
            + "".join(dots)
            + "</svg>"
        )
    parts.append(
        f'<p class="facets">{len(payload.points)} located points'
        + (f' <span class="dropped-note">({payload.dropped} without coordinates)</span>'
           if payload.dropped else "")
        + "</p>"
    )
    for var, values in payload.facets.items():
        chips = "".join(f'<span class="facet-value">{_esc(v)}</span>' for v in values)
        parts.append(f'<p class="facets">{_esc(var)}: {chips}</p>')
    return "".join(parts)


def render_series_html(payload: SeriesPayload, palette, title: str) -> str:
    try:
        svg = export_component_svg(payload, payload.chart_kind, palette, title=title)
    except EmptySeries:
        return '<p class="dropped-note">no chartable rows</p>'
    body = svg.decode("utf-8").split("\n", 1)[1]  # drop the XML declaration
    note = (
        f'<p class="dropped-note">{payload.dropped} row(s) dropped</p>'
        if payload.dropped else ""
    )
    return body + note


def _component_body_snapshot(comp, payload: RenderPayload | None, palette) -> str:
    if comp.type == "text":
        return sanitize_html(comp.html)
    if comp.type == "counter" and isinstance(payload, CardPayload):
        return render_card_html(payload)
    if comp.type == "chart" and isinstance(payload, SeriesPayload):
        return render_series_html(payload, palette, comp.title)
    if comp.type == "table" and isinstance(payload, TypedTablePayload):
        title = f"<h3>{_esc(comp.title)}</h3>" if comp.title else ""
        return title + render_table_html(payload)
    if comp.type == "map" and isinstance(payload, GeoSetPayload):
        return render_geo_html(payload)
    if comp.type in ("text_search", "action"):
        return (
            '<p class="dropped-note">interactive '
            + comp.type.replace("_", " ")
            + " (available in the hosted story)</p>"
        )
    return ""


def _query_block(comp) -> str:
    query = getattr(comp, "query", None) or getattr(comp, "query_template", None)
    if not query:
        return ""
    return (
        '<details class="query"><summary>View query</summary>'
        f"<pre>{_esc(query)}</pre></details>"
    )


def render_story_html(
    story: Story,
    payloads: dict[str, RenderPayload],
    *,
    live: bool = False,
) -> bytes:
    """The full story as one self-contained HTML5 document."""
    sections = []
    for comp in story.components:
        if live and comp.type in ("counter", "chart", "table", "map"):
            extra = (
                f' data-query="{_esc(comp.query)}"'
                + (f' data-label="{_esc(comp.label)}"' if comp.type == "counter" else "")
            )
            body = '<div class="live-target">loading...</div>'
        else:
            extra = ""
            body = _component_body_snapshot(comp, payloads.get(comp.id), story.palette)
        sections.append(
            f'<section class="component component-{comp.type}" id="{_esc(comp.id)}" '
            f'data-type="{comp.type}"{extra}>{body}{_query_block(comp)}</section>'
        )

    snapshot_data = ""
    if not live:
        data = {
            cid: payload_to_doc(p) for cid, p in payloads.items()
            if any(c.id == cid for c in story.components)
        }
        snapshot_data = (
            '<script type="application/json" id="story-data">'
            + json.dumps(data, ensure_ascii=False).replace("</", "<\\/")
            + "</script>"
        )
    live_script = ""
    if live:
        live_script = (
            f"<script>window.STORY_PALETTE = {json.dumps(list(story.palette))};"
            f"{_LIVE_SCRIPT}</script>"
        )

    subtitle = f'<p class="subtitle">{_esc(story.subtitle)}</p>' if story.subtitle else ""
    description = f"<p>{_esc(story.description)}</p>" if story.description else ""
    doc = f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8"/>
<meta name="viewport" content="width=device-width, initial-scale=1"/>
<title>{_esc(story.title)}</title>
<style>{_STYLE}</style>
</head>
<body data-endpoint="{_esc(story.endpoint)}">
<header class="story-header">
<h1>{_esc(story.title)}</h1>
{subtitle}{description}
</header>
<main>
{chr(10).join(sections)}
</main>
{snapshot_data}{live_script}
</body>
</html>
"""
    return doc.encode("utf-8")


def render_component_page(
    story: Story, component_id: str, payload: RenderPayload | None
) -> bytes:
    """Standalone page for one component (the embed target)."""
    comp = story.component(component_id)
    body = _component_body_snapshot(comp, payload, story.palette)
    doc = f"""<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"/><title>{_esc(story.title)}</title>
<style>{_STYLE}</style></head>
<body>
<main>
<section class="component component-{comp.type}" id="{_esc(comp.id)}" data-type="{comp.type}">
{body}{_query_block(comp)}
</section>
</main>
</body>
</html>
"""
    return doc.encode("utf-8")


def export_component_embed(story: Story, component_id: str, base_url: str) -> bytes:
    """HTML fragment embedding one component via a sandboxed inline frame."""
    comp = story.component(component_id)  # raises UnknownComponent
    src = f"{base_url.rstrip('/')}/embed/{story.id}/{comp.id}"
    fragment = (
        f'<iframe src="{_esc(src)}" sandbox="allow-scripts" loading="lazy" '
        'width="100%" height="420" style="border:0" '
        f'title="{_esc(story.title)} component"></iframe>'
    )
    return fragment.encode("utf-8")


__all__ = [
    "UnknownComponent",
    "export_component_embed",
    "render_component_page",
    "render_story_html",
]
