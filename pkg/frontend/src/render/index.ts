import type { RenderPayload } from "../types";
import { renderCard } from "./card";
import { renderSeries } from "./chart";
import { renderGeo } from "./map";
import { renderTable, type CellClick } from "./table";

/** Render any payload; table cell clicks feed action chains. */
export function renderPayload(
  payload: RenderPayload,
  palette: string[],
  options: { title?: string; onCellClick?: (click: CellClick) => void } = {},
): HTMLElement | SVGSVGElement {
  switch (payload.kind) {
    case "card":
      return renderCard(payload);
    case "series":
      return renderSeries(payload, palette, options.title ?? "");
    case "typed_table":
      return renderTable(payload, options.onCellClick);
    case "geo_set":
      return renderGeo(payload);
  }
}

export { renderCard, renderGeo, renderSeries, renderTable };
export type { CellClick };
