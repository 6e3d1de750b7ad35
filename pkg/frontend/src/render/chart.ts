/**
 * SVG chart rendering in the browser: all four kinds consume the same
 * series payload shape. Colors cycle through the story palette.
 */

import type { ChartKind, SeriesPayload } from "../types";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 640;
const HEIGHT = 360;
const M = { left: 56, right: 20, top: 48, bottom: 44 };
const FALLBACK = "#4E79A7";

function el<K extends keyof SVGElementTagNameMap>(
  tag: K, attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, String(value));
  }
  return node;
}

function color(palette: string[], i: number): string {
  return palette.length ? palette[i % palette.length] : FALLBACK;
}

function scale(values: number[]): [number, number] {
  const low = Math.min(0, ...values);
  let high = Math.max(0, ...values);
  if (high === low) high = low + 1;
  return [low, high];
}

export function renderSeries(
  payload: SeriesPayload, palette: string[], title = "",
): SVGSVGElement {
  const svg = el("svg", {
    width: WIDTH, height: HEIGHT, viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
  });
  svg.dataset.chartKind = payload.chart_kind;
  const caption = el("text", {
    x: WIDTH / 2, y: 24, "text-anchor": "middle",
    "font-family": "sans-serif", "font-size": 16, "font-weight": "bold",
  });
  caption.textContent = title;
  svg.appendChild(caption);
  if (!payload.values.length) {
    const note = el("text", { x: WIDTH / 2, y: HEIGHT / 2, "text-anchor": "middle" });
    note.textContent = "no chartable rows";
    svg.appendChild(note);
    return svg;
  }
  const painters: Record<ChartKind, () => void> = {
    bar: () => paintBar(svg, payload, palette),
    line: () => paintLine(svg, payload, palette),
    scatter: () => paintScatter(svg, payload, palette),
    doughnut: () => paintDoughnut(svg, payload, palette),
  };
  painters[payload.chart_kind]();
  return svg;
}

function plotBox() {
  return {
    x: M.left, y: M.top,
    w: WIDTH - M.left - M.right, h: HEIGHT - M.top - M.bottom,
  };
}

function axes(svg: SVGSVGElement): void {
  const { x, y, w, h } = plotBox();
  svg.appendChild(el("line", { x1: x, y1: y + h, x2: x + w, y2: y + h, stroke: "#444" }));
  svg.appendChild(el("line", { x1: x, y1: y, x2: x, y2: y + h, stroke: "#444" }));
}

function paintBar(svg: SVGSVGElement, payload: SeriesPayload, palette: string[]): void {
  axes(svg);
  const { x, y, w, h } = plotBox();
  const [low, high] = scale(payload.values);
  const slot = w / payload.values.length;
  const zeroY = y + h - ((0 - low) / (high - low)) * h;
  payload.values.forEach((value, i) => {
    const top = y + h - ((value - low) / (high - low)) * h;
    const rect = el("rect", {
      x: x + i * slot + slot * 0.15,
      y: Math.min(top, zeroY),
      width: slot * 0.7,
      height: Math.abs(zeroY - top),
      fill: color(palette, i),
    });
    const tip = el("title");
    tip.textContent = `${payload.labels[i]}: ${value}`;
    rect.appendChild(tip);
    svg.appendChild(rect);
    const label = el("text", {
      x: x + i * slot + slot / 2, y: y + h + 16,
      "text-anchor": "middle", "font-size": 11, "font-family": "sans-serif",
    });
    label.textContent = payload.labels[i].slice(0, 16);
    svg.appendChild(label);
  });
}

function paintLine(svg: SVGSVGElement, payload: SeriesPayload, palette: string[]): void {
  axes(svg);
  const { x, y, w, h } = plotBox();
  const [low, high] = scale(payload.values);
  const step = w / Math.max(payload.values.length - 1, 1);
  const points = payload.values
    .map((value, i) => {
      const px = x + i * step;
      const py = y + h - ((value - low) / (high - low)) * h;
      return `${px.toFixed(2)},${py.toFixed(2)}`;
    })
    .join(" ");
  svg.appendChild(el("polyline", {
    points, fill: "none", stroke: color(palette, 0), "stroke-width": 2,
  }));
}

function paintScatter(svg: SVGSVGElement, payload: SeriesPayload, palette: string[]): void {
  axes(svg);
  const { x, y, w, h } = plotBox();
  const xs = payload.labels.map((label) => Number(label));
  const xLow = Math.min(...xs);
  let xHigh = Math.max(...xs);
  if (xHigh === xLow) xHigh = xLow + 1;
  const [low, high] = scale(payload.values);
  payload.values.forEach((value, i) => {
    const dot = el("circle", {
      cx: x + ((xs[i] - xLow) / (xHigh - xLow)) * w,
      cy: y + h - ((value - low) / (high - low)) * h,
      r: 4,
      fill: color(palette, i),
    });
    svg.appendChild(dot);
  });
}

function polar(cx: number, cy: number, r: number, deg: number): [number, number] {
  const rad = (deg * Math.PI) / 180;
  return [cx + r * Math.cos(rad), cy + r * Math.sin(rad)];
}

function paintDoughnut(svg: SVGSVGElement, payload: SeriesPayload, palette: string[]): void {
  const cx = WIDTH / 2;
  const cy = (HEIGHT + M.top) / 2;
  const outer = Math.min(WIDTH, HEIGHT - M.top) / 2 - 24;
  const inner = outer * 0.55;
  const total = payload.values.reduce((a, b) => a + b, 0) || 1;
  let angle = -90;
  payload.values.forEach((value, i) => {
    let sweep = (360 * value) / total;
    if (sweep >= 360) sweep = 359.999;  // single full-circle segment
    const [sx, sy] = polar(cx, cy, outer, angle);
    const [ex, ey] = polar(cx, cy, outer, angle + sweep);
    const [ix, iy] = polar(cx, cy, inner, angle + sweep);
    const [jx, jy] = polar(cx, cy, inner, angle);
    const large = sweep > 180 ? 1 : 0;
    const path = el("path", {
      d: `M ${sx} ${sy} A ${outer} ${outer} 0 ${large} 1 ${ex} ${ey} ` +
         `L ${ix} ${iy} A ${inner} ${inner} 0 ${large} 0 ${jx} ${jy} Z`,
      fill: color(palette, i),
    });
    const tip = el("title");
    tip.textContent = `${payload.labels[i]}: ${value}`;
    path.appendChild(tip);
    svg.appendChild(path);
    angle += sweep;
  });
}
