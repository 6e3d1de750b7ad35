/**
 * Map preview: an SVG point plot with a facet filter sidebar on the left
 * and a metadata sidebar that fills in when a point is clicked.
 */

import type { GeoPayload, GeoPoint } from "../types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 520;
const HEIGHT = 360;

interface Bounds {
  latMin: number;
  latMax: number;
  lonMin: number;
  lonMax: number;
}

function bounds(points: GeoPoint[]): Bounds {
  const lats = points.map((p) => p.lat);
  const lons = points.map((p) => p.lon);
  return {
    latMin: Math.min(...lats) - 0.05,
    latMax: Math.max(...lats) + 0.05,
    lonMin: Math.min(...lons) - 0.05,
    lonMax: Math.max(...lons) + 0.05,
  };
}

export function renderGeo(payload: GeoPayload): HTMLElement {
  const container = document.createElement("div");
  container.className = "map-preview";

  const filters = document.createElement("aside");
  filters.className = "map-filters";
  const active = new Map<string, Set<string>>();

  const plot = document.createElement("div");
  plot.className = "map-plot";

  const metadata = document.createElement("aside");
  metadata.className = "map-metadata";
  metadata.textContent = "click a point for details";

  const visible = (point: GeoPoint): boolean => {
    for (const [variable, values] of active) {
      if (values.size === 0) continue;
      if (!values.has(point.metadata[variable] ?? "")) return false;
    }
    return true;
  };

  const repaint = () => {
    plot.replaceChildren();
    const points = payload.points.filter(visible);
    const note = document.createElement("p");
    note.className = "map-count";
    note.textContent =
      `${points.length} of ${payload.points.length} points` +
      (payload.dropped ? ` (${payload.dropped} rows without coordinates)` : "");
    plot.appendChild(note);
    if (!points.length) return;

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("width", String(WIDTH));
    svg.setAttribute("height", String(HEIGHT));
    svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
    svg.setAttribute("class", "map-canvas");
    const box = bounds(points);
    for (const point of points) {
      const dot = document.createElementNS(SVG_NS, "circle");
      const x = ((point.lon - box.lonMin) / (box.lonMax - box.lonMin || 1)) * (WIDTH - 40) + 20;
      const y = HEIGHT - 20 -
        ((point.lat - box.latMin) / (box.latMax - box.latMin || 1)) * (HEIGHT - 40);
      dot.setAttribute("cx", x.toFixed(1));
      dot.setAttribute("cy", y.toFixed(1));
      dot.setAttribute("r", "6");
      dot.setAttribute("class", "map-point");
      const tip = document.createElementNS(SVG_NS, "title");
      tip.textContent = point.metadata["name"] ?? `${point.lat}, ${point.lon}`;
      dot.appendChild(tip);
      dot.addEventListener("click", () => showMetadata(point));
      svg.appendChild(dot);
    }
    plot.appendChild(svg);
  };

  const showMetadata = (point: GeoPoint) => {
    metadata.replaceChildren();
    const heading = document.createElement("h4");
    heading.textContent = point.metadata["name"] ?? "point";
    metadata.appendChild(heading);
    const list = document.createElement("dl");
    const entries: [string, string][] = [
      ["lat", String(point.lat)],
      ["lon", String(point.lon)],
      ...Object.entries(point.metadata),
    ];
    for (const [key, value] of entries) {
      const dt = document.createElement("dt");
      dt.textContent = key;
      const dd = document.createElement("dd");
      dd.textContent = value;
      list.append(dt, dd);
    }
    metadata.appendChild(list);
  };

  for (const [variable, values] of Object.entries(payload.facets)) {
    const group = document.createElement("fieldset");
    group.className = "facet-group";
    const legend = document.createElement("legend");
    legend.textContent = variable;
    group.appendChild(legend);
    active.set(variable, new Set());
    for (const value of values) {
      const label = document.createElement("label");
      label.className = "facet-value";
      const input = document.createElement("input");
      input.type = "checkbox";
      input.value = value;
      input.addEventListener("change", () => {
        const selected = active.get(variable)!;
        if (input.checked) selected.add(value);
        else selected.delete(value);
        repaint();
      });
      label.append(input, document.createTextNode(` ${value}`));
      group.appendChild(label);
    }
    filters.appendChild(group);
  }

  container.append(filters, plot, metadata);
  repaint();
  return container;
}
