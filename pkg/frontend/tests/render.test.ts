import { describe, expect, it } from "vitest";

import { renderCard, renderGeo, renderSeries, renderTable } from "../src/render/index";
import type { GeoPayload, SeriesPayload, TablePayload } from "../src/types";

const series = (kind: SeriesPayload["chart_kind"]): SeriesPayload => ({
  kind: "series", chart_kind: kind,
  labels: kind === "scatter" ? ["1700", "1800", "1900"] : ["Genova", "Savona", "Imperia"],
  values: [8, 7, 6], dropped: 0,
});

describe("chart rendering", () => {
  it("all four kinds render from the same payload shape", () => {
    const palette = ["#111111", "#222222"];
    const bar = renderSeries(series("bar"), palette, "Bar");
    expect(bar.querySelectorAll("rect").length).toBe(3);
    expect(bar.dataset.chartKind).toBe("bar");

    const line = renderSeries(series("line"), palette, "Line");
    expect(line.querySelectorAll("polyline").length).toBe(1);

    const scatter = renderSeries(series("scatter"), palette, "Scatter");
    expect(scatter.querySelectorAll("circle").length).toBe(3);

    const doughnut = renderSeries(series("doughnut"), palette, "Doughnut");
    expect(doughnut.querySelectorAll("path").length).toBe(3);
  });

  it("colors cycle through the story palette", () => {
    const svg = renderSeries(series("bar"), ["#AA0000", "#00BB00"], "");
    const fills = [...svg.querySelectorAll("rect")].map((r) => r.getAttribute("fill"));
    expect(fills).toEqual(["#AA0000", "#00BB00", "#AA0000"]);
  });

  it("titles end up in the svg", () => {
    const svg = renderSeries(series("bar"), [], "Bells per province");
    expect(svg.textContent).toContain("Bells per province");
  });
});

describe("table rendering", () => {
  const payload: TablePayload = {
    kind: "typed_table",
    vars: ["name", "audio", "image", "page", "weight"],
    rows: [[
      { render: "text", value: "Campanone" },
      { render: "audio", value: "http://m.org/a.mp3", url: "http://m.org/a.mp3" },
      { render: "image", value: "http://m.org/i.jpg", url: "http://m.org/i.jpg" },
      { render: "link", value: "http://m.org/page", url: "http://m.org/page" },
      { render: "number", value: "850.5", number: 850.5 },
    ], [
      { render: "text", value: "Campana" },
      null, null, null,
      { render: "number", value: "320", number: 320 },
    ]],
  };

  it("media cells become players and embeds", () => {
    const table = renderTable(payload);
    expect(table.querySelectorAll("thead th").length).toBe(5);
    expect(table.querySelectorAll("tbody tr").length).toBe(2);
    expect(table.querySelectorAll("audio[controls]").length).toBe(1);
    expect(table.querySelectorAll("img").length).toBe(1);
    expect(table.querySelectorAll("a").length).toBe(1);
  });

  it("cell clicks report the variable and cell", () => {
    const clicks: string[] = [];
    const table = renderTable(payload, ({ variable, cell }) => {
      clicks.push(`${variable}=${cell.value}`);
    });
    const firstCell = table.querySelector<HTMLElement>("tbody td.clickable")!;
    firstCell.click();
    expect(clicks).toEqual(["name=Campanone"]);
  });
});

describe("map rendering", () => {
  const payload: GeoPayload = {
    kind: "geo_set",
    points: [
      { lat: 44.4, lon: 8.9, metadata: { name: "Genova bell", province: "Genova" } },
      { lat: 44.3, lon: 8.5, metadata: { name: "Savona bell", province: "Savona" } },
      { lat: 43.9, lon: 8.0, metadata: { name: "Imperia bell", province: "Imperia" } },
    ],
    facets: { province: ["Genova", "Imperia", "Savona"] },
    dropped: 1,
  };

  it("renders points, a facet sidebar, and a metadata sidebar", () => {
    const map = renderGeo(payload);
    expect(map.querySelectorAll(".map-point").length).toBe(3);
    const sidebar = map.querySelector(".map-filters")!;
    expect(sidebar.querySelectorAll("input[type=checkbox]").length).toBe(3);
    expect(map.querySelector(".map-metadata")).not.toBeNull();
    expect(map.textContent).toContain("3 of 3 points");
    expect(map.textContent).toContain("1 rows without coordinates");
  });

  it("facet checkboxes filter the plotted points", () => {
    const map = renderGeo(payload);
    const genova = [...map.querySelectorAll<HTMLInputElement>("input[type=checkbox]")]
      .find((input) => input.value === "Genova")!;
    genova.checked = true;
    genova.dispatchEvent(new Event("change"));
    expect(map.querySelectorAll(".map-point").length).toBe(1);
    expect(map.textContent).toContain("1 of 3 points");
  });

  it("clicking a point fills the metadata sidebar", () => {
    const map = renderGeo(payload);
    const point = map.querySelector<SVGCircleElement>(".map-point")!;
    point.dispatchEvent(new Event("click"));
    const metadata = map.querySelector(".map-metadata")!;
    expect(metadata.textContent).toContain("Genova bell");
    expect(metadata.textContent).toContain("province");
  });
});

describe("card rendering", () => {
  it("shows the number and the label", () => {
    const card = renderCard({ kind: "card", value: 26, label: "Bells" });
    expect(card.querySelector(".card-value")!.textContent).toBe("26");
    expect(card.querySelector(".card-label")!.textContent).toBe("Bells");
  });
});
